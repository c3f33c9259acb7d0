#pragma once

// Feed-forward regression of tail-sensitive mass averages from either
// polymer representation: an MLP trained with Adam on mean-squared error,
// with train-split standardization, seeded shuffling, and early stopping on
// validation loss. Single-threaded and bitwise deterministic for a fixed
// (corpus, split, config).

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "polyset/dataset.hpp"
#include "polyset/encode.hpp"

namespace polyset {

enum class TargetMoment { Mz, Mz1 };

std::string target_name(TargetMoment t);
TargetMoment target_from_name(const std::string& name);

struct TrainConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    int batch_size = 64;
    int max_epochs = 500;
    int patience = 25;  // epochs without a new best validation loss
    std::uint64_t seed = 1;
    std::vector<int> hidden_dims{64, 64};
    TargetMoment target = TargetMoment::Mz1;
};

void validate_config(const TrainConfig& cfg);

// Affine-ReLU stack, identity output, scalar head. weights[l] maps layer l
// to layer l+1 (rows = fan-out).
struct MlpModel {
    std::vector<int> layer_dims;  // input, hidden..., 1
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;
};

// Weights uniform on +/- sqrt(6 / (fan_in + fan_out)) drawn row-major per
// layer from the seeded stream; biases zero.
MlpModel init_model(const std::vector<int>& layer_dims, std::uint64_t seed);

double forward(const MlpModel& model, const Eigen::VectorXd& x);

struct Gradients {
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;
};

// Batch MSE and its exact reverse-mode gradients. X rows are samples.
// Non-finite activations raise a numeric error naming the layer.
double loss_and_gradients(const MlpModel& model, const Eigen::MatrixXd& X,
                          const Eigen::VectorXd& y, Gradients& out);

// Worst parameter-wise relative deviation of the backpropagated gradient
// from a central finite difference with the given step.
double max_rel_gradient_error(const MlpModel& model, const Eigen::MatrixXd& X,
                              const Eigen::VectorXd& y, double step = 1e-5);

struct AdamState {
    std::int64_t step = 0;
    std::vector<Eigen::MatrixXd> m_w, v_w;
    std::vector<Eigen::VectorXd> m_b, v_b;
};

AdamState make_adam_state(const MlpModel& model);

// Textbook update with bias correction; increments the step counter.
void adam_step(MlpModel& model, AdamState& state, const Gradients& grads,
               const TrainConfig& cfg);

// Per-feature affine map fitted on the train split only. Constant features
// keep std 1 and are listed instead of dividing by zero.
struct Standardizer {
    Eigen::VectorXd mean;
    Eigen::VectorXd std;
    std::vector<int> constant_features;
    double target_mean = 0.0;
    double target_std = 1.0;
    bool target_constant = false;
};

Standardizer fit_standardizer(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);
Eigen::MatrixXd apply_standardizer(const Standardizer& st, const Eigen::MatrixXd& X);

// 1 - residual/total sum of squares. Needs >= 2 points and var(y) > 0.
double r_squared(const std::vector<double>& y, const std::vector<double>& yhat);

// (100/n) * sum 2|y - yhat| / (|y| + |yhat|), 0/0 terms counting as 0.
// Inputs must be >= 0.
double smape(const std::vector<double>& y, const std::vector<double>& yhat);

struct TrainReport {
    std::vector<double> train_mse;  // per epoch, standardized target scale
    std::vector<double> val_mse;
    int best_epoch = 0;  // 1-based; 0 when no epoch ran
    int epochs_run = 0;
    double test_r2 = 0.0;         // on log10 targets
    double test_smape = 0.0;      // percent, linear mass scale
    double test_log_smape = 0.0;  // percent, log10 scale (diagnostic only)
    std::vector<std::int64_t> test_ids;
    std::vector<double> test_y_log10;
    std::vector<double> test_pred_log10;
    double wall_seconds = 0.0;  // in-memory only, never serialized
};

// Raised when the validation loss stops being finite; carries the curves up
// to the failing epoch so callers can still persist them.
class TrainingDivergence : public std::runtime_error {
public:
    TrainingDivergence(int epoch_index, TrainReport partial_report);
    int epoch;
    TrainReport partial;
};

struct TrainOutcome {
    MlpModel model;
    Standardizer standardizer;
    TrainReport report;
};

// Embeds every referenced record with the chosen representation, trains on
// standardized log10 targets, early-stops on validation MSE, restores the
// best-validation parameters, and evaluates on the test split. max_epochs 0
// returns the initialized model with empty curves.
TrainOutcome train(const std::vector<PolymerRecord>& records, EmbeddingKind representation,
                   const SplitAssignment& split, const EncoderConfig& encoder_cfg,
                   const TrainConfig& cfg, const std::string& monomer);

// {"layer_dims":..,"weights":..,"biases":..,"standardizer":..,"config":..,"seed":..}
// with weights as nested row-major arrays.
void write_checkpoint(const MlpModel& model, const Standardizer& st, const TrainConfig& cfg,
                      const std::string& path);

struct Checkpoint {
    MlpModel model;
    Standardizer standardizer;
    TrainConfig config;
};

Checkpoint read_checkpoint(const std::string& path);

// "epoch,train_mse,val_mse" rows, epochs 1-based.
void write_learning_curve_csv(const TrainReport& report, const std::string& path);

}  // namespace polyset
