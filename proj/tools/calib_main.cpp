#include <cmath>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "coral/calib/extrinsic.hpp"
#include "coral/calib/io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"calib — camera-to-device calibration math"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand(
      "solve", "least-squares planar offset from correspondence pairs");
  std::string input;
  std::string output;
  solve->add_option("--input", input, "JSON file with correspondence pairs")
      ->required();
  solve->add_option("--output", output, "also write the solution here");
  CLI11_PARSE(app, argc, argv);

  try {
    const auto file = coral::calib::load_calibration_file(input);
    const auto offset = coral::calib::solve_extrinsic(file.pairs);

    double ss = 0.0;
    for (const auto& pair : file.pairs)
      ss += (coral::calib::apply_planar(offset, pair.camera) - pair.device)
                .squaredNorm();
    const double rms =
        std::sqrt(ss / static_cast<double>(file.pairs.size()));

    nlohmann::json j = coral::calib::to_json(offset);
    j["beta_deg"] = offset.beta * 180.0 / M_PI;
    j["pairs"] = file.pairs.size();
    j["rms_residual"] = rms;
    std::cout << j.dump(2) << '\n';
    if (!output.empty()) {
      std::ofstream out(output, std::ios::trunc);
      if (!out) throw coral::Error("cannot open for writing: " + output);
      out << j.dump(2) << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "calib: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
