#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ssg/game.hpp"
#include "ssg/npl.hpp"
#include "ssg/simulate.hpp"
#include "ssg/suqr.hpp"

namespace ssg::io {

// I/O failures (missing files, unwritable paths) -> IoError; malformed or
// inconsistent content -> std::invalid_argument.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Doubles are serialized with 17 significant digits so that reads round-trip
// bit-exactly; output bytes are deterministic.
std::string format_double(double v);

// Writes via a temp file in the same directory followed by a rename.
void atomic_write(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

// game.json: {"T": int, "K": int, "U": [[f64]], "R": [f64]?, "P": [f64]?}
SecurityGame read_game(const std::string& path);
std::string game_to_json(const SecurityGame& game);

// dataset.csv: header x_0,...,x_{T-1},target; one row per record.
AttackDataset read_dataset_csv(const std::string& path);
std::string dataset_to_csv(const AttackDataset& data);

// model.json, keyed by "type": gsuqr / ssuqr / npl.
struct LearnedModel {
    enum class Kind { Gsuqr, Ssuqr, Npl };
    Kind kind = Kind::Gsuqr;
    GeneralizedSuqrModel gsuqr;
    StandardSuqrModel ssuqr;
    NplModel npl;

    // Prediction closure; ssuqr needs the game for its features.
    QFn predictor(const SecurityGame* game = nullptr) const;
};
LearnedModel read_model(const std::string& path);
std::string model_to_json(const LearnedModel& model);

std::string bounds_to_json(const std::string& model, double m, double ln_m, double ln_capacity);
std::string plan_to_json(const std::vector<double>& x, double utility);
std::string report_to_json(const sim::EvalReport& report, const sim::DecayFit* decay);
std::string report_to_csv(const sim::EvalReport& report, int sample_size,
                          const sim::DecayFit* decay);

}  // namespace ssg::io
