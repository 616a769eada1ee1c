// Writes the shipped fixture clouds into the given directory.

#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "cli.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: hcomp_make_fixtures DIR\n";
    return 2;
  }
  const std::string dir = argv[1];
  const std::vector<std::pair<std::string, std::string>> files{
      {"heis_center.csv", "heis-center:48"},   {"z_line.csv", "line:48"},
      {"ex0_x.csv", "ex0-x:64"},               {"ex0_x_image.csv", "ex0-x-image:64"},
      {"ex0_y.csv", "ex0-y:32"},               {"ex0_y_image.csv", "ex0-y-image:32"},
      {"f2_ball3.csv", "ball:f2:3"},           {"f2_ball3_ab.csv", "ball:f2:3:f2+ab"},
  };
  try {
    for (const auto& [name, id] : files) {
      std::ofstream out(dir + "/" + name);
      if (!out) throw std::runtime_error("cannot write " + dir + "/" + name);
      hcomp::write_point_cloud_csv(out, hcomp::cli::resolve_cloud(id));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
