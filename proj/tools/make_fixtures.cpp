// Regenerates the files under fixtures/: two small systems for the CLI tests
// and the measured manufactured-solution errors used as regression values.
#include <filesystem>
#include <iostream>
#include <sstream>

#include "gpm/io.hpp"
#include "gpm/verify.hpp"

using namespace gpm;

int main(int argc, char** argv) {
  const std::filesystem::path dir = argc > 1 ? argv[1] : "fixtures";

  const std::vector<double> lo{0, 0}, hi{1, 1};
  const auto lattice = generate_lattice(make_box_domain(2, lo, hi, 0.25), 0.1);
  const auto connected = perturb_positions(set_influence_radius(lattice, 0.2), 0.02, 2024);
  io::save_system(dir / "connected.json", connected);
  io::save_system(dir / "disconnected.json", two_cluster_system(2024, 2).system());

  const std::vector<std::pair<ManufacturedCase, std::string>> cases{
      {ManufacturedCase::sin2(1, {1.0 / 20, 1.0 / 40, 1.0 / 80}), "manufactured_d1.csv"},
      {ManufacturedCase::sin2(2, {1.0 / 25, 1.0 / 50, 1.0 / 100}), "manufactured_d2.csv"}};
  for (const auto& [mc, name] : cases) {
    const auto levels = run_manufactured(mc, WeightFunction::polynomial(2, mc.dim));
    std::ostringstream out;
    write_manufactured_csv(out, levels);
    io::write_file_atomic(dir / name, out.str());
    std::cout << name << "\n" << out.str();
  }
  return 0;
}
