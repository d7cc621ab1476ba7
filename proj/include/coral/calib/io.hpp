#ifndef CORAL_CALIB_IO_HPP_
#define CORAL_CALIB_IO_HPP_

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "coral/calib/camera_model.hpp"
#include "coral/calib/extrinsic.hpp"

namespace coral::calib {

struct BadCalibrationFile final : Error {
  using Error::Error;
};

// Input file schema (JSON):
//
//   {
//     "camera": {"fx": .., "fy": .., "cx": .., "cy": ..,
//                "k1": .., "k2": .., "k3": .., "p1": .., "p2": ..},
//     "pairs":  [{"device": [x, y], "camera": [x, y]}, ...]
//   }
//
// "camera" may be omitted when only the extrinsic solve is wanted; the
// distortion coefficients default to zero.
struct CalibrationInput {
  std::optional<CameraModel> camera;
  std::vector<PoseCorrespondence> pairs;
};

CameraModel camera_model_from_json(const nlohmann::json& j);
std::vector<PoseCorrespondence> correspondences_from_json(const nlohmann::json& j);
CalibrationInput load_calibration_file(const std::string& path);

nlohmann::json to_json(const ExtrinsicOffset& offset);

}  // namespace coral::calib

#endif  // CORAL_CALIB_IO_HPP_
