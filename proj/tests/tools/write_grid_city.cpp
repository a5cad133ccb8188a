// Writes the synthetic grid-city datasets used throughout the tests:
//   write_grid_city <dir> [spur_count]
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "grid_city.hpp"

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: write_grid_city <dir> [spur_count]\n";
    return 1;
  }
  const std::filesystem::path dir = argv[1];
  std::filesystem::create_directories(dir);
  recon::testkit::GridCityOptions o;
  if (argc > 2) o.spur_count = std::atoi(argv[2]);
  const auto text = recon::testkit::make_grid_city_text(o);
  std::ofstream(dir / "network.geojson") << text.network_geojson;
  std::ofstream(dir / "assets.csv") << text.assets_csv;
  std::ofstream(dir / "blockgroups.geojson") << text.blockgroups_geojson;
  return 0;
}
