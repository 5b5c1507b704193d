#include "mos/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mos::harness {

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << text;
    if (!f) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<std::size_t> sample_orders(const io::FeatureSet& fs) {
    std::vector<std::size_t> orders(fs.labels.size());
    for (std::size_t i = 0; i < fs.labels.size(); ++i) orders[i] = fs.labels[i].model_order;
    return orders;
}

} // namespace

Split stratified_split(std::span<const std::size_t> labels, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction < 1.0))
        throw std::invalid_argument("stratified_split: fraction must be in (0,1)");
    std::map<std::size_t, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
    Split split;
    for (auto& [cls, idx] : by_class) {
        Rng rng(derive_stream(seed, 0xC1A5, cls));
        for (std::size_t i = idx.size(); i-- > 1;) std::swap(idx[i], idx[rng.below(i + 1)]);
        const std::size_t n_train =
            static_cast<std::size_t>(fraction * static_cast<double>(idx.size()));
        split.train.insert(split.train.end(), idx.begin(), idx.begin() + n_train);
        split.test.insert(split.test.end(), idx.begin() + n_train, idx.end());
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

GenerateResult cmd_generate(const chansim::SimConfig& cfg, std::size_t n_common,
                            const std::string& out_path, std::ostream& log) {
    const std::vector<chansim::ChannelSample> samples = chansim::generate_dataset(cfg);
    io::write_dataset(out_path, {cfg, samples});

    const std::size_t nc = cfg.carriers_hz.size();
    const std::size_t n_phys = samples.size() / nc;

    io::FeatureSet prop;
    prop.kind = "proposed";
    prop.n_common = n_common;
    prop.l_max = cfg.l_max;
    prop.sim = cfg;
    io::FeatureSet ec = prop;
    ec.kind = "ecnet";
    ec.d_cols = 1;

    std::vector<linalg::Matrix> hs(nc);
    for (std::size_t i = 0; i < n_phys; ++i) {
        for (std::size_t c = 0; c < nc; ++c) hs[c] = samples[i * nc + c].h;
        const std::size_t l = samples[i * nc].model_order;

        features::FeatureMatrix fm = features::features_from_channels(hs, cfg.k_smooth, n_common);
        if (i == 0) {
            prop.d_cols = fm.g.cols();
            prop.mode_sizes = fm.mode_sizes;
        }
        prop.g.push_back(std::move(fm.g));
        prop.labels.push_back(features::make_label(l, n_common));

        features::FeatureMatrix sm =
            features::siso_feature_from_channel(hs[0], cfg.k_smooth, n_common);
        if (i == 0) ec.mode_sizes = sm.mode_sizes;
        ec.g.push_back(std::move(sm.g));
        ec.labels.push_back(features::make_label(l, n_common));
    }

    GenerateResult res;
    res.dataset_path = out_path;
    res.features_path = out_path + ".feat";
    res.ecnet_features_path = out_path + ".ecnet.feat";
    res.n_samples = n_phys;
    res.d_cols = prop.d_cols;
    io::write_features(res.features_path, prop);
    io::write_features(res.ecnet_features_path, ec);

    log << "dataset: " << samples.size() << " stored channels (" << cfg.l_max << " classes x "
        << cfg.samples_per_class << " samples x " << nc << " carriers) -> " << out_path << "\n"
        << "features: " << n_phys << " x G(" << n_common << "x" << prop.d_cols << ") -> "
        << res.features_path << "\n"
        << "ecnet features: " << n_phys << " x g(" << n_common << "x1) -> "
        << res.ecnet_features_path << "\n";
    return res;
}

TrainSummary cmd_train(const std::string& features_path, const TrainOptions& opt,
                       const std::string& model_path, std::ostream& log) {
    const io::FeatureSet fs = io::read_features(features_path);
    if (fs.g.empty()) throw std::runtime_error("cmd_train: empty feature set");
    const std::vector<std::size_t> orders = sample_orders(fs);
    const Split split = stratified_split(orders, opt.split_fraction, opt.train.seed);
    if (split.train.empty()) throw std::runtime_error("cmd_train: empty training split");

    nn::NNModel model = [&] {
        if (opt.arch == "proposed")
            return nn::make_proposed(fs.n_common, fs.d_cols, opt.filters, opt.filter_size);
        if (opt.arch == "ecnet") return nn::make_ecnet(fs.n_common, fs.d_cols, fs.l_max, opt.filters);
        throw std::invalid_argument("cmd_train: unknown arch " + opt.arch);
    }();
    const nn::Loss loss = opt.arch == "proposed" ? nn::Loss::bce : nn::Loss::cce;

    std::vector<linalg::RealMatrix> xs;
    std::vector<std::vector<double>> ys;
    xs.reserve(split.train.size());
    ys.reserve(split.train.size());
    for (std::size_t i : split.train) {
        xs.push_back(fs.g[i]);
        if (loss == nn::Loss::bce) {
            std::vector<double> y(fs.labels[i].bits.begin(), fs.labels[i].bits.end());
            ys.push_back(std::move(y));
        } else {
            ys.push_back(estimators::multiclass_label(orders[i], fs.l_max));
        }
    }

    model = nn::init_weights(std::move(model), derive_stream(opt.train.seed, 1, 0));
    nn::TrainConfig tc = opt.train;
    tc.seed = derive_stream(opt.train.seed, 2, 0);
    const nn::TrainResult tr = nn::train(model, xs, ys, loss, tc);

    std::map<std::string, std::string> extra;
    extra["arch"] = opt.arch;
    extra["feature_kind"] = fs.kind;
    extra["feature_file"] = features_path;
    extra["split_seed"] = std::to_string(opt.train.seed);
    extra["split_fraction"] = fmt17(opt.split_fraction);
    extra["epochs"] = std::to_string(opt.train.epochs);
    extra["batch_size"] = std::to_string(opt.train.batch_size);
    extra["learning_rate"] = fmt17(opt.train.learning_rate);
    io::save_model(model_path, model, extra);

    std::ostringstream csv;
    csv << "epoch,mean_loss\n";
    for (std::size_t e = 0; e < tr.epoch_loss.size(); ++e)
        csv << (e + 1) << ',' << fmt17(tr.epoch_loss[e]) << '\n';
    TrainSummary s;
    s.model_path = model_path;
    s.loss_csv_path = model_path + ".loss.csv";
    write_text_file(s.loss_csv_path, csv.str());
    s.n_train = split.train.size();
    s.parameters = nn::param_count(model);
    s.final_loss = tr.epoch_loss.empty() ? 0.0 : tr.epoch_loss.back();

    log << "trained " << opt.arch << " (" << s.parameters << " parameters) on " << s.n_train
        << " samples, " << opt.train.epochs << " epochs; final mean loss " << s.final_loss << "\n"
        << "model -> " << model_path << ", loss log -> " << s.loss_csv_path << "\n";
    return s;
}

EvalReport cmd_eval(const std::string& features_path, const std::string& model_path,
                    const EvalOptions& opt, const std::string& report_path, std::ostream& log) {
    const io::FeatureSet fs = io::read_features(features_path);
    const std::vector<std::size_t> orders = sample_orders(fs);

    std::optional<nn::NNModel> model;
    std::map<std::string, std::string> extra;
    if (opt.method == "proposed" || opt.method == "ecnet") {
        if (model_path.empty())
            throw std::invalid_argument("cmd_eval: method " + opt.method + " requires a model");
        model = io::load_model(model_path, &extra);
    } else if (opt.method != "large") {
        throw std::invalid_argument("cmd_eval: unknown method " + opt.method);
    }

    double fraction;
    std::uint64_t seed;
    if (opt.split_fraction) {
        fraction = *opt.split_fraction;
    } else if (extra.count("split_fraction")) {
        fraction = std::stod(extra.at("split_fraction"));
    } else {
        throw std::invalid_argument("cmd_eval: split fraction neither given nor recorded");
    }
    if (opt.split_seed) {
        seed = *opt.split_seed;
    } else if (extra.count("split_seed")) {
        seed = std::stoull(extra.at("split_seed"));
    } else {
        throw std::invalid_argument("cmd_eval: split seed neither given nor recorded");
    }

    const Split split = stratified_split(orders, fraction, seed);
    if (split.test.empty()) throw std::runtime_error("cmd_eval: empty test split");

    estimators::LargeConfig lc;
    lc.rho = opt.rho;
    std::vector<std::size_t> truth, predicted;
    truth.reserve(split.test.size());
    predicted.reserve(split.test.size());
    std::ostringstream trace;
    bool trace_header_done = false;

    for (std::size_t i : split.test) {
        estimators::OrderEstimate est;
        if (opt.method == "proposed") {
            est = estimators::proposed_estimate(*model, fs.g[i], opt.xi);
        } else if (opt.method == "ecnet") {
            est = estimators::ecnet_estimate(*model, fs.g[i]);
        } else {
            features::FeatureMatrix fm{fs.g[i], fs.n_common, fs.mode_sizes};
            est = estimators::large_estimate(estimators::large_input_from_features(fm), lc);
        }
        truth.push_back(orders[i]);
        predicted.push_back(est.order);
        if (!opt.trace_csv_path.empty()) {
            if (!trace_header_done) {
                trace << "sample,true_order,estimated_order";
                for (std::size_t k = 0; k < est.scores.size(); ++k) trace << ",s" << (k + 1);
                trace << '\n';
                trace_header_done = true;
            }
            trace << i << ',' << orders[i] << ',' << est.order;
            for (double s : est.scores) trace << ',' << fmt17(s);
            trace << '\n';
        }
    }

    EvalReport report = evaluate_predictions(opt.method, fs.l_max, truth, predicted);
    report.config["features"] = features_path;
    if (!model_path.empty()) report.config["model"] = model_path;
    if (opt.method == "proposed") report.config["xi"] = fmt17(opt.xi);
    if (opt.method == "large") report.config["rho"] = fmt17(opt.rho);
    report.config["split_fraction"] = fmt17(fraction);
    report.config["split_seed"] = std::to_string(seed);
    report.config["sim_seed"] = std::to_string(fs.sim.seed);
    report.config["snr_db"] = fmt17(fs.sim.snr_db);
    report.config["n_common"] = std::to_string(fs.n_common);
    report.config["d_cols"] = std::to_string(fs.d_cols);

    if (!report_path.empty()) write_text_file(report_path, to_json(report));
    if (!opt.trace_csv_path.empty()) write_text_file(opt.trace_csv_path, trace.str());

    log << opt.method << ": overall accuracy " << report.overall_accuracy()
        << ", overestimation rate " << report.overestimation_rate << " on " << report.n_test
        << " test samples\n";
    for (std::size_t c = 0; c < report.l_max; ++c)
        log << "  class " << (c + 1) << ": " << report.per_class_accuracy[c] << "\n";
    return report;
}

void cmd_inspect(const std::string& dataset_path, std::size_t sample_id,
                 const InspectOptions& opt, const std::string& out_csv, std::ostream& log) {
    const io::Dataset ds = io::read_dataset(dataset_path);
    const std::size_t nc = ds.cfg.carriers_hz.size();
    const std::size_t n_phys = ds.samples.size() / nc;
    if (sample_id >= n_phys)
        throw std::invalid_argument("cmd_inspect: sample id out of range (have " +
                                    std::to_string(n_phys) + " samples)");

    std::vector<Tensor<double>> tensors;
    std::vector<std::vector<double>> mode_sv;
    for (std::size_t c = 0; c < nc; ++c) {
        tensors.push_back(features::preprocess_channel(ds.samples[sample_id * nc + c].h,
                                                       ds.cfg.k_smooth));
        for (auto& sv : features::mode_singular_values(tensors.back()))
            mode_sv.push_back(std::move(sv));
    }
    const features::FeatureMatrix fm = features::assemble_features(tensors, opt.n_common);
    const std::size_t true_order = ds.samples[sample_id * nc].model_order;

    estimators::LargeConfig lc;
    lc.rho = opt.rho;
    const estimators::OrderEstimate large = estimators::large_estimate(mode_sv, lc);

    std::optional<estimators::OrderEstimate> proposed, ecnet;
    if (!opt.proposed_model_path.empty()) {
        const nn::NNModel m = io::load_model(opt.proposed_model_path);
        proposed = estimators::proposed_estimate(m, fm.g, opt.xi);
    }
    if (!opt.ecnet_model_path.empty()) {
        const nn::NNModel m = io::load_model(opt.ecnet_model_path);
        const features::FeatureMatrix sm = features::siso_feature_from_channel(
            ds.samples[sample_id * nc].h, ds.cfg.k_smooth, opt.n_common);
        ecnet = estimators::ecnet_estimate(m, sm.g);
    }

    std::ostringstream csv;
    csv << "# dataset=" << dataset_path << " sample=" << sample_id
        << " true_order=" << true_order << '\n';
    csv << "# large_order=" << large.order;
    if (proposed) csv << " proposed_order=" << proposed->order << " xi=" << fmt17(opt.xi);
    if (ecnet) csv << " ecnet_order=" << ecnet->order;
    csv << " rho=" << fmt17(opt.rho) << '\n';
    csv << "index";
    for (std::size_t c = 0; c < fm.g.cols(); ++c) csv << ",g" << (c + 1);
    if (proposed) csv << ",proposed_score";
    if (ecnet) csv << ",ecnet_prob";
    csv << ",large_eps\n";
    for (std::size_t i = 0; i < opt.n_common; ++i) {
        csv << (i + 1);
        for (std::size_t c = 0; c < fm.g.cols(); ++c) csv << ',' << fmt17(fm.g(i, c));
        if (proposed) csv << ',' << fmt17(proposed->scores[i]);
        if (ecnet) {
            csv << ',';
            if (i < ecnet->scores.size()) csv << fmt17(ecnet->scores[i]);
        }
        csv << ',';
        if (i < large.scores.size()) csv << fmt17(large.scores[i]);
        csv << '\n';
    }
    write_text_file(out_csv, csv.str());

    log << "sample " << sample_id << " (true order " << true_order << "): large " << large.order;
    if (proposed) log << ", proposed " << proposed->order;
    if (ecnet) log << ", ecnet " << ecnet->order;
    log << " -> " << out_csv << "\n";
}

void cmd_report(const std::vector<std::string>& report_paths, const std::string& out_csv,
                std::ostream& log) {
    if (report_paths.empty()) throw std::invalid_argument("cmd_report: no reports given");
    std::vector<EvalReport> reports;
    std::vector<std::string> names;
    for (const std::string& p : report_paths) {
        reports.push_back(report_from_json(read_text_file(p)));
        std::string name = p;
        if (const auto slash = name.find_last_of('/'); slash != std::string::npos)
            name = name.substr(slash + 1);
        if (name.size() > 5 && name.ends_with(".json")) name = name.substr(0, name.size() - 5);
        name = reports.back().method + ":" + name;
        names.push_back(name);
    }
    const std::string csv = comparison_csv(reports, names);
    if (!out_csv.empty()) write_text_file(out_csv, csv);
    log << comparison_text(reports, names);
}

} // namespace mos::harness
