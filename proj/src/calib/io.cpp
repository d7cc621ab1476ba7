#include "coral/calib/io.hpp"

#include <fstream>

namespace coral::calib {

namespace {

double require_number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw BadCalibrationFile(std::string("missing numeric field \"") + key + '"');
  }
  return j[key].get<double>();
}

Eigen::Vector2d point_from_json(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array() || j[key].size() != 2) {
    throw BadCalibrationFile(std::string("pair entry needs a 2-element \"") +
                             key + "\" array");
  }
  return {j[key][0].get<double>(), j[key][1].get<double>()};
}

}  // namespace

CameraModel camera_model_from_json(const nlohmann::json& j) {
  CameraModel m;
  m.fx = require_number(j, "fx");
  m.fy = require_number(j, "fy");
  m.cx = require_number(j, "cx");
  m.cy = require_number(j, "cy");
  m.k1 = j.value("k1", 0.0);
  m.k2 = j.value("k2", 0.0);
  m.k3 = j.value("k3", 0.0);
  m.p1 = j.value("p1", 0.0);
  m.p2 = j.value("p2", 0.0);
  validate(m);
  return m;
}

std::vector<PoseCorrespondence> correspondences_from_json(const nlohmann::json& j) {
  if (!j.is_array()) {
    throw BadCalibrationFile("\"pairs\" must be an array");
  }
  std::vector<PoseCorrespondence> pairs;
  pairs.reserve(j.size());
  for (const auto& entry : j) {
    PoseCorrespondence pair;
    pair.device = point_from_json(entry, "device");
    pair.camera = point_from_json(entry, "camera");
    pairs.push_back(pair);
  }
  return pairs;
}

CalibrationInput load_calibration_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw BadCalibrationFile("cannot open " + path);
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw BadCalibrationFile(path + ": " + e.what());
  }
  CalibrationInput input;
  if (j.contains("camera")) {
    input.camera = camera_model_from_json(j["camera"]);
  }
  if (j.contains("pairs")) {
    input.pairs = correspondences_from_json(j["pairs"]);
  }
  return input;
}

nlohmann::json to_json(const ExtrinsicOffset& offset) {
  return {{"delta_x", offset.delta_x},
          {"delta_y", offset.delta_y},
          {"beta_rad", offset.beta},
          {"beta_deg", offset.beta * 180.0 / M_PI}};
}

}  // namespace coral::calib
