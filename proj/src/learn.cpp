#include "polyset/learn.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "polyset/rng.hpp"
#include "polyset/serialization.hpp"

namespace polyset {

std::string target_name(TargetMoment t) {
    switch (t) {
        case TargetMoment::Mz: return "mz";
        case TargetMoment::Mz1: return "mz1";
    }
    throw std::logic_error("target_name: unknown target");
}

TargetMoment target_from_name(const std::string& name) {
    if (name == "mz") return TargetMoment::Mz;
    if (name == "mz1") return TargetMoment::Mz1;
    throw std::invalid_argument("unknown target name: " + name);
}

void validate_config(const TrainConfig& cfg) {
    if (!(cfg.learning_rate > 0.0)) {
        throw std::invalid_argument("train config: learning_rate must be > 0");
    }
    if (!(cfg.beta1 > 0.0 && cfg.beta1 < 1.0) || !(cfg.beta2 > 0.0 && cfg.beta2 < 1.0)) {
        throw std::invalid_argument("train config: betas must be in (0, 1)");
    }
    if (!(cfg.epsilon > 0.0)) throw std::invalid_argument("train config: epsilon must be > 0");
    if (cfg.batch_size < 1) throw std::invalid_argument("train config: batch_size must be >= 1");
    if (cfg.max_epochs < 0) throw std::invalid_argument("train config: max_epochs must be >= 0");
    if (cfg.patience < 1) throw std::invalid_argument("train config: patience must be >= 1");
    if (cfg.max_epochs > 0 && cfg.patience > cfg.max_epochs) {
        throw std::invalid_argument("train config: patience must not exceed max_epochs");
    }
    for (int h : cfg.hidden_dims) {
        if (h < 1) throw std::invalid_argument("train config: hidden dims must be >= 1");
    }
}

namespace {

void check_model(const MlpModel& model) {
    std::size_t n_layers = model.layer_dims.size();
    if (n_layers < 2) {
        throw std::invalid_argument("model: need at least input and output dims");
    }
    if (model.layer_dims.back() != 1) {
        throw std::invalid_argument("model: output dim must be 1");
    }
    if (model.weights.size() != n_layers - 1 || model.biases.size() != n_layers - 1) {
        throw std::invalid_argument("model: weights/biases count mismatch");
    }
    for (std::size_t l = 0; l + 1 < n_layers; ++l) {
        if (model.weights[l].rows() != model.layer_dims[l + 1] ||
            model.weights[l].cols() != model.layer_dims[l] ||
            model.biases[l].size() != model.layer_dims[l + 1]) {
            throw std::invalid_argument("model: layer " + std::to_string(l) +
                                        " shape mismatch");
        }
    }
}

Eigen::VectorXd predict_batch(const MlpModel& model, const Eigen::MatrixXd& X) {
    Eigen::MatrixXd a = X.transpose();
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        Eigen::MatrixXd z = (model.weights[l] * a).colwise() + model.biases[l];
        a = (l + 1 < model.weights.size()) ? z.cwiseMax(0.0).eval() : z;
    }
    return a.row(0).transpose();
}

}  // namespace

MlpModel init_model(const std::vector<int>& layer_dims, std::uint64_t seed) {
    if (layer_dims.size() < 2) {
        throw std::invalid_argument("init_model: need at least input and output dims");
    }
    for (int d : layer_dims) {
        if (d < 1) throw std::invalid_argument("init_model: dims must be >= 1");
    }
    MlpModel m;
    m.layer_dims = layer_dims;
    Rng rng(seed);
    for (std::size_t l = 0; l + 1 < layer_dims.size(); ++l) {
        int fan_in = layer_dims[l];
        int fan_out = layer_dims[l + 1];
        double limit = std::sqrt(6.0 / (fan_in + fan_out));
        Eigen::MatrixXd w(fan_out, fan_in);
        for (int r = 0; r < fan_out; ++r) {
            for (int c = 0; c < fan_in; ++c) w(r, c) = rng.uniform(-limit, limit);
        }
        m.weights.push_back(std::move(w));
        m.biases.push_back(Eigen::VectorXd::Zero(fan_out));
    }
    return m;
}

double forward(const MlpModel& model, const Eigen::VectorXd& x) {
    check_model(model);
    if (x.size() != model.layer_dims.front()) {
        throw std::invalid_argument("forward: input size " + std::to_string(x.size()) +
                                    " does not match model input dim " +
                                    std::to_string(model.layer_dims.front()));
    }
    Eigen::VectorXd a = x;
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        Eigen::VectorXd z = model.weights[l] * a + model.biases[l];
        a = (l + 1 < model.weights.size()) ? z.cwiseMax(0.0).eval() : z;
    }
    return a[0];
}

double loss_and_gradients(const MlpModel& model, const Eigen::MatrixXd& X,
                          const Eigen::VectorXd& y, Gradients& out) {
    check_model(model);
    if (X.rows() == 0) throw std::invalid_argument("loss_and_gradients: empty batch");
    if (X.cols() != model.layer_dims.front()) {
        throw std::invalid_argument("loss_and_gradients: feature dim mismatch");
    }
    if (y.size() != X.rows()) {
        throw std::invalid_argument("loss_and_gradients: target count mismatch");
    }

    std::size_t depth = model.weights.size();
    std::vector<Eigen::MatrixXd> acts(depth + 1);  // acts[l]: dims[l] x batch
    std::vector<Eigen::MatrixXd> pre(depth);
    acts[0] = X.transpose();
    for (std::size_t l = 0; l < depth; ++l) {
        pre[l] = (model.weights[l] * acts[l]).colwise() + model.biases[l];
        if (!pre[l].allFinite()) {
            throw std::runtime_error("non-finite activations at layer " +
                                     std::to_string(l + 1));
        }
        acts[l + 1] = (l + 1 < depth) ? pre[l].cwiseMax(0.0).eval() : pre[l];
    }

    Eigen::VectorXd resid = acts[depth].row(0).transpose() - y;
    double batch = static_cast<double>(X.rows());
    double mse = resid.squaredNorm() / batch;

    out.weights.assign(depth, Eigen::MatrixXd());
    out.biases.assign(depth, Eigen::VectorXd());
    Eigen::MatrixXd delta = (2.0 / batch) * resid.transpose();  // dL/d(pre), 1 x batch
    for (std::size_t l = depth; l-- > 0;) {
        out.weights[l] = delta * acts[l].transpose();
        out.biases[l] = delta.rowwise().sum();
        if (l > 0) {
            delta = (model.weights[l].transpose() * delta)
                        .cwiseProduct((pre[l - 1].array() > 0.0).cast<double>().matrix());
        }
    }
    return mse;
}

double max_rel_gradient_error(const MlpModel& model, const Eigen::MatrixXd& X,
                              const Eigen::VectorXd& y, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("gradient check: step must be > 0");
    Gradients analytic;
    loss_and_gradients(model, X, y, analytic);

    MlpModel probe = model;
    Gradients scratch;
    double worst = 0.0;
    auto check_one = [&](double* p, double grad) {
        double orig = *p;
        *p = orig + step;
        double up = loss_and_gradients(probe, X, y, scratch);
        *p = orig - step;
        double down = loss_and_gradients(probe, X, y, scratch);
        *p = orig;
        double fd = (up - down) / (2.0 * step);
        double denom = std::max(std::abs(grad) + std::abs(fd), 1e-6);
        worst = std::max(worst, std::abs(grad - fd) / denom);
    };
    for (std::size_t l = 0; l < probe.weights.size(); ++l) {
        for (Eigen::Index i = 0; i < probe.weights[l].size(); ++i) {
            check_one(probe.weights[l].data() + i, analytic.weights[l].data()[i]);
        }
        for (Eigen::Index i = 0; i < probe.biases[l].size(); ++i) {
            check_one(probe.biases[l].data() + i, analytic.biases[l].data()[i]);
        }
    }
    return worst;
}

AdamState make_adam_state(const MlpModel& model) {
    check_model(model);
    AdamState st;
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        st.m_w.push_back(Eigen::MatrixXd::Zero(model.weights[l].rows(), model.weights[l].cols()));
        st.v_w.push_back(Eigen::MatrixXd::Zero(model.weights[l].rows(), model.weights[l].cols()));
        st.m_b.push_back(Eigen::VectorXd::Zero(model.biases[l].size()));
        st.v_b.push_back(Eigen::VectorXd::Zero(model.biases[l].size()));
    }
    return st;
}

void adam_step(MlpModel& model, AdamState& state, const Gradients& grads,
               const TrainConfig& cfg) {
    check_model(model);
    if (grads.weights.size() != model.weights.size() ||
        state.m_w.size() != model.weights.size()) {
        throw std::invalid_argument("adam_step: state/gradient layer count mismatch");
    }
    state.step += 1;
    double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
    double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        if (grads.weights[l].rows() != model.weights[l].rows() ||
            grads.weights[l].cols() != model.weights[l].cols() ||
            grads.biases[l].size() != model.biases[l].size()) {
            throw std::invalid_argument("adam_step: gradient shape mismatch at layer " +
                                        std::to_string(l));
        }
        state.m_w[l] = cfg.beta1 * state.m_w[l] + (1.0 - cfg.beta1) * grads.weights[l];
        state.v_w[l] = cfg.beta2 * state.v_w[l] +
                       (1.0 - cfg.beta2) * grads.weights[l].cwiseProduct(grads.weights[l]);
        model.weights[l].array() -=
            cfg.learning_rate * (state.m_w[l].array() / bc1) /
            ((state.v_w[l].array() / bc2).sqrt() + cfg.epsilon);

        state.m_b[l] = cfg.beta1 * state.m_b[l] + (1.0 - cfg.beta1) * grads.biases[l];
        state.v_b[l] = cfg.beta2 * state.v_b[l] +
                       (1.0 - cfg.beta2) * grads.biases[l].cwiseProduct(grads.biases[l]);
        model.biases[l].array() -= cfg.learning_rate * (state.m_b[l].array() / bc1) /
                                   ((state.v_b[l].array() / bc2).sqrt() + cfg.epsilon);
    }
}

Standardizer fit_standardizer(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    if (X.rows() < 1) throw std::invalid_argument("standardizer: empty matrix");
    if (y.size() != X.rows()) throw std::invalid_argument("standardizer: target count mismatch");
    Standardizer st;
    st.mean = X.colwise().mean().transpose();
    Eigen::MatrixXd centered = X.rowwise() - st.mean.transpose();
    st.std = centered.array().square().colwise().mean().sqrt().transpose();
    for (Eigen::Index j = 0; j < st.std.size(); ++j) {
        if (!(st.std[j] > 1e-12)) {
            st.std[j] = 1.0;
            st.constant_features.push_back(static_cast<int>(j));
        }
    }
    st.target_mean = y.mean();
    st.target_std = std::sqrt((y.array() - st.target_mean).square().mean());
    if (!(st.target_std > 1e-12)) {
        st.target_std = 1.0;
        st.target_constant = true;
    }
    return st;
}

Eigen::MatrixXd apply_standardizer(const Standardizer& st, const Eigen::MatrixXd& X) {
    if (X.cols() != st.mean.size()) {
        throw std::invalid_argument("standardizer: feature dim mismatch");
    }
    return ((X.rowwise() - st.mean.transpose()).array().rowwise() /
            st.std.transpose().array())
        .matrix();
}

double r_squared(const std::vector<double>& y, const std::vector<double>& yhat) {
    if (y.size() != yhat.size()) throw std::invalid_argument("r_squared: size mismatch");
    if (y.size() < 2) throw std::invalid_argument("r_squared: need at least 2 points");
    double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        ss_res += (y[i] - yhat[i]) * (y[i] - yhat[i]);
        ss_tot += (y[i] - mean) * (y[i] - mean);
    }
    if (!(ss_tot > 0.0)) throw std::domain_error("r_squared: y has zero variance");
    return 1.0 - ss_res / ss_tot;
}

double smape(const std::vector<double>& y, const std::vector<double>& yhat) {
    if (y.size() != yhat.size()) throw std::invalid_argument("smape: size mismatch");
    if (y.empty()) throw std::invalid_argument("smape: empty input");
    double acc = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] < 0.0 || yhat[i] < 0.0) throw std::domain_error("smape: negative input");
        double denom = y[i] + yhat[i];
        if (denom > 0.0) acc += 2.0 * std::abs(y[i] - yhat[i]) / denom;
    }
    return 100.0 * acc / static_cast<double>(y.size());
}

TrainingDivergence::TrainingDivergence(int epoch_index, TrainReport partial_report)
    : std::runtime_error("training diverged at epoch " + std::to_string(epoch_index) +
                         ": validation loss is not finite"),
      epoch(epoch_index),
      partial(std::move(partial_report)) {}

TrainOutcome train(const std::vector<PolymerRecord>& records, EmbeddingKind representation,
                   const SplitAssignment& split, const EncoderConfig& encoder_cfg,
                   const TrainConfig& cfg, const std::string& monomer) {
    validate_config(cfg);
    auto t0 = std::chrono::steady_clock::now();

    std::unordered_map<std::int64_t, const PolymerRecord*> by_id;
    by_id.reserve(records.size());
    for (const PolymerRecord& r : records) by_id.emplace(r.id, &r);

    auto resolve = [&](const std::vector<std::int64_t>& ids, const char* name) {
        if (ids.empty()) {
            throw std::invalid_argument(std::string("train: empty ") + name + " split");
        }
        std::vector<const PolymerRecord*> out;
        out.reserve(ids.size());
        for (std::int64_t id : ids) {
            auto it = by_id.find(id);
            if (it == by_id.end()) {
                throw std::invalid_argument("train: split references unknown record id " +
                                            std::to_string(id));
            }
            out.push_back(it->second);
        }
        return out;
    };
    auto train_recs = resolve(split.train, "train");
    auto val_recs = resolve(split.val, "val");
    auto test_recs = resolve(split.test, "test");

    struct SplitData {
        Eigen::MatrixXd x;
        Eigen::VectorXd y;
        std::vector<std::int64_t> ids;
    };
    auto gather = [&](const std::vector<const PolymerRecord*>& recs) {
        SplitData d;
        d.ids.reserve(recs.size());
        d.y.resize(static_cast<Eigen::Index>(recs.size()));
        for (std::size_t i = 0; i < recs.size(); ++i) {
            Embedding e = representation == EmbeddingKind::PolySet
                              ? record_polyset_embedding(*recs[i], encoder_cfg, monomer)
                              : record_baseline_embedding(*recs[i], encoder_cfg, monomer);
            if (i == 0) d.x.resize(recs.size(), e.dim());
            d.x.row(static_cast<Eigen::Index>(i)) = e.values.transpose();
            d.y[static_cast<Eigen::Index>(i)] = cfg.target == TargetMoment::Mz1
                                                    ? recs[i]->target_log10_mz1
                                                    : recs[i]->target_log10_mz;
            d.ids.push_back(recs[i]->id);
        }
        return d;
    };
    SplitData tr = gather(train_recs);
    SplitData va = gather(val_recs);
    SplitData te = gather(test_recs);

    Standardizer st = fit_standardizer(tr.x, tr.y);
    Eigen::MatrixXd xtr = apply_standardizer(st, tr.x);
    Eigen::MatrixXd xva = apply_standardizer(st, va.x);
    Eigen::MatrixXd xte = apply_standardizer(st, te.x);
    auto standardize_y = [&](const Eigen::VectorXd& y) {
        return ((y.array() - st.target_mean) / st.target_std).matrix().eval();
    };
    Eigen::VectorXd ytr = standardize_y(tr.y);
    Eigen::VectorXd yva = standardize_y(va.y);

    std::vector<int> dims;
    dims.push_back(static_cast<int>(xtr.cols()));
    dims.insert(dims.end(), cfg.hidden_dims.begin(), cfg.hidden_dims.end());
    dims.push_back(1);
    MlpModel model = init_model(dims, mix_seed(cfg.seed, 1));
    AdamState adam = make_adam_state(model);

    TrainReport report;
    MlpModel best = model;
    double best_val = std::numeric_limits<double>::infinity();

    std::vector<int> order(static_cast<std::size_t>(xtr.rows()));
    std::iota(order.begin(), order.end(), 0);
    Gradients grads;

    for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        Rng shuffle_rng(mix_seed(cfg.seed, 2, static_cast<std::uint64_t>(epoch)));
        shuffle_rng.shuffle(order);

        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(cfg.batch_size)) {
            std::size_t count =
                std::min(order.size() - start, static_cast<std::size_t>(cfg.batch_size));
            Eigen::MatrixXd xb(count, xtr.cols());
            Eigen::VectorXd yb(count);
            for (std::size_t i = 0; i < count; ++i) {
                xb.row(static_cast<Eigen::Index>(i)) = xtr.row(order[start + i]);
                yb[static_cast<Eigen::Index>(i)] = ytr[order[start + i]];
            }
            epoch_loss += loss_and_gradients(model, xb, yb, grads) * static_cast<double>(count);
            adam_step(model, adam, grads, cfg);
        }
        epoch_loss /= static_cast<double>(order.size());

        Eigen::VectorXd pv = predict_batch(model, xva);
        double val = (pv - yva).squaredNorm() / static_cast<double>(yva.size());

        report.train_mse.push_back(epoch_loss);
        report.val_mse.push_back(val);
        report.epochs_run = epoch;
        if (!std::isfinite(val) || !std::isfinite(epoch_loss)) {
            throw TrainingDivergence(epoch, report);
        }
        if (val < best_val) {
            best_val = val;
            best = model;
            report.best_epoch = epoch;
        } else if (epoch - report.best_epoch >= cfg.patience) {
            break;
        }
    }
    if (report.best_epoch > 0) model = best;

    Eigen::VectorXd pt = predict_batch(model, xte);
    report.test_ids = te.ids;
    report.test_y_log10.assign(te.y.data(), te.y.data() + te.y.size());
    report.test_pred_log10.resize(static_cast<std::size_t>(pt.size()));
    for (Eigen::Index i = 0; i < pt.size(); ++i) {
        report.test_pred_log10[static_cast<std::size_t>(i)] =
            pt[i] * st.target_std + st.target_mean;
    }
    report.test_r2 = r_squared(report.test_y_log10, report.test_pred_log10);

    std::vector<double> lin_y(report.test_y_log10.size());
    std::vector<double> lin_p(report.test_pred_log10.size());
    for (std::size_t i = 0; i < lin_y.size(); ++i) {
        lin_y[i] = std::pow(10.0, report.test_y_log10[i]);
        lin_p[i] = std::pow(10.0, report.test_pred_log10[i]);
    }
    report.test_smape = smape(lin_y, lin_p);
    report.test_log_smape = smape(report.test_y_log10, report.test_pred_log10);
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    return {std::move(model), std::move(st), std::move(report)};
}

namespace {

std::string matrix_to_json(const Eigen::MatrixXd& m) {
    std::string out = "[";
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        if (r) out += ",";
        out += "[";
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) out += ",";
            out += num17(m(r, c));
        }
        out += "]";
    }
    return out + "]";
}

std::string vector_to_json(const Eigen::VectorXd& v) {
    std::string out = "[";
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += num17(v[i]);
    }
    return out + "]";
}

template <typename T>
std::string ints_to_json(const std::vector<T>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(v[i]);
    }
    return out + "]";
}

}  // namespace

void write_checkpoint(const MlpModel& model, const Standardizer& st, const TrainConfig& cfg,
                      const std::string& path) {
    check_model(model);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << "{\"layer_dims\":" << ints_to_json(model.layer_dims) << ",\"weights\":[";
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        if (l) f << ",";
        f << matrix_to_json(model.weights[l]);
    }
    f << "],\"biases\":[";
    for (std::size_t l = 0; l < model.biases.size(); ++l) {
        if (l) f << ",";
        f << vector_to_json(model.biases[l]);
    }
    f << "],\"standardizer\":{\"mean\":" << vector_to_json(st.mean)
      << ",\"std\":" << vector_to_json(st.std)
      << ",\"constant_features\":" << ints_to_json(st.constant_features)
      << ",\"target_mean\":" << num17(st.target_mean)
      << ",\"target_std\":" << num17(st.target_std)
      << ",\"target_constant\":" << (st.target_constant ? "true" : "false") << "}";
    f << ",\"config\":{\"learning_rate\":" << num17(cfg.learning_rate)
      << ",\"beta1\":" << num17(cfg.beta1) << ",\"beta2\":" << num17(cfg.beta2)
      << ",\"epsilon\":" << num17(cfg.epsilon) << ",\"batch_size\":" << cfg.batch_size
      << ",\"max_epochs\":" << cfg.max_epochs << ",\"patience\":" << cfg.patience
      << ",\"hidden_dims\":" << ints_to_json(cfg.hidden_dims) << ",\"target\":\""
      << target_name(cfg.target) << "\"}";
    f << ",\"seed\":" << cfg.seed << "}\n";
    f.flush();
    if (!f) throw std::runtime_error("write failed: " + path);
}

Checkpoint read_checkpoint(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    nlohmann::json j = nlohmann::json::parse(ss.str());

    Checkpoint out;
    out.model.layer_dims = j.at("layer_dims").get<std::vector<int>>();
    for (const auto& layer : j.at("weights")) {
        Eigen::MatrixXd w(layer.size(), layer.at(0).size());
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) {
                w(r, c) = layer.at(r).at(c).get<double>();
            }
        }
        out.model.weights.push_back(std::move(w));
    }
    for (const auto& layer : j.at("biases")) {
        Eigen::VectorXd b(layer.size());
        for (Eigen::Index i = 0; i < b.size(); ++i) b[i] = layer.at(i).get<double>();
        out.model.biases.push_back(std::move(b));
    }
    check_model(out.model);

    const auto& s = j.at("standardizer");
    auto vec = [](const nlohmann::json& arr) {
        Eigen::VectorXd v(arr.size());
        for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = arr.at(i).get<double>();
        return v;
    };
    out.standardizer.mean = vec(s.at("mean"));
    out.standardizer.std = vec(s.at("std"));
    out.standardizer.constant_features = s.at("constant_features").get<std::vector<int>>();
    out.standardizer.target_mean = s.at("target_mean").get<double>();
    out.standardizer.target_std = s.at("target_std").get<double>();
    out.standardizer.target_constant = s.at("target_constant").get<bool>();

    const auto& c = j.at("config");
    out.config.learning_rate = c.at("learning_rate").get<double>();
    out.config.beta1 = c.at("beta1").get<double>();
    out.config.beta2 = c.at("beta2").get<double>();
    out.config.epsilon = c.at("epsilon").get<double>();
    out.config.batch_size = c.at("batch_size").get<int>();
    out.config.max_epochs = c.at("max_epochs").get<int>();
    out.config.patience = c.at("patience").get<int>();
    out.config.hidden_dims = c.at("hidden_dims").get<std::vector<int>>();
    out.config.target = target_from_name(c.at("target").get<std::string>());
    out.config.seed = j.at("seed").get<std::uint64_t>();
    return out;
}

void write_learning_curve_csv(const TrainReport& report, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << "epoch,train_mse,val_mse\n";
    for (std::size_t i = 0; i < report.train_mse.size(); ++i) {
        f << (i + 1) << "," << num17(report.train_mse[i]) << "," << num17(report.val_mse[i])
          << "\n";
    }
    f.flush();
    if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace polyset
