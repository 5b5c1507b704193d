#include "mos/harness.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

struct GenerateArgs {
    mos::chansim::SimConfig sim;
    std::size_t n_common = 50;
    std::string out;
};

struct TrainArgs {
    mos::harness::TrainOptions opt;
    std::string features;
    std::string out;
};

struct EvalArgs {
    mos::harness::EvalOptions opt;
    std::string features;
    std::string model;
    std::string out;
    double split_fraction = 0.7;
    std::uint64_t seed = 0;
};

struct InspectArgs {
    mos::harness::InspectOptions opt;
    std::string dataset;
    std::size_t id = 0;
    std::string out;
};

struct ReportArgs {
    std::vector<std::string> files;
    std::string out;
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multipath model order estimation on simulated MIMO-OFDM channels"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a key=value file");

    GenerateArgs g;
    CLI::App* gen = app.add_subcommand("generate", "Simulate a dataset and build its features");
    gen->add_option("--out", g.out, "Output dataset path (features get .feat suffixes)")
        ->required();
    gen->add_option("--seed", g.sim.seed, "Dataset seed")->required();
    gen->add_option("--m-antennas", g.sim.m_antennas, "Receive antennas M");
    gen->add_option("--n-sub", g.sim.n_sub, "Sub-carriers");
    gen->add_option("--k-smooth", g.sim.k_smooth, "Smoothing window K");
    gen->add_option("--l-max", g.sim.l_max, "Largest model order class");
    gen->add_option("--samples-per-class", g.sim.samples_per_class, "Samples per class");
    gen->add_option("--snr-db", g.sim.snr_db, "Signal to noise ratio in dB");
    gen->add_option("--carriers-hz", g.sim.carriers_hz, "Carrier frequencies in Hz")
        ->expected(1, 8);
    gen->add_option("--n-common", g.n_common, "Common singular-value count N at the NN input");

    TrainArgs t;
    CLI::App* train = app.add_subcommand("train", "Train a model on a feature file");
    train->add_option("--features", t.features, "Feature file")->required();
    train->add_option("--out", t.out, "Output model path")->required();
    train->add_option("--seed", t.opt.train.seed, "Split/init/shuffle seed")->required();
    train->add_option("--arch", t.opt.arch, "Architecture: proposed | ecnet");
    train->add_option("--epochs", t.opt.train.epochs, "Training epochs");
    train->add_option("--batch-size", t.opt.train.batch_size, "Mini-batch size");
    train->add_option("--lr", t.opt.train.learning_rate, "Adam learning rate");
    train->add_option("--split", t.opt.split_fraction, "Training fraction");
    train->add_option("--filters", t.opt.filters, "Filter/unit count F");
    train->add_option("--filter-size", t.opt.filter_size, "Convolution filter size Q");

    EvalArgs e;
    CLI::App* eval = app.add_subcommand("eval", "Evaluate an estimator on the test split");
    eval->add_option("--features", e.features, "Feature file")->required();
    eval->add_option("--model", e.model, "Model file (proposed/ecnet)");
    eval->add_option("--method", e.opt.method, "Estimator: proposed | ecnet | large");
    eval->add_option("--xi", e.opt.xi, "Score threshold for the proposed estimator");
    eval->add_option("--rho", e.opt.rho, "LaRGE decision threshold");
    CLI::Option* sf = eval->add_option("--split", e.split_fraction, "Training fraction");
    CLI::Option* ss = eval->add_option("--seed", e.seed, "Split seed (defaults to the model's)");
    eval->add_option("--out", e.out, "Report JSON path")->required();
    eval->add_option("--trace", e.opt.trace_csv_path, "Per-sample score CSV path");

    InspectArgs i;
    CLI::App* inspect = app.add_subcommand("inspect", "Dump one sample's features and scores");
    inspect->add_option("--dataset", i.dataset, "Dataset file")->required();
    inspect->add_option("--id", i.id, "Physical sample index")->required();
    inspect->add_option("--proposed-model", i.opt.proposed_model_path, "Proposed model file");
    inspect->add_option("--ecnet-model", i.opt.ecnet_model_path, "ECNet model file");
    inspect->add_option("--xi", i.opt.xi, "Proposed threshold");
    inspect->add_option("--rho", i.opt.rho, "LaRGE threshold");
    inspect->add_option("--n-common", i.opt.n_common, "Common singular-value count N");
    inspect->add_option("--out", i.out, "Trace CSV path")->required();

    ReportArgs r;
    CLI::App* report = app.add_subcommand("report", "Merge eval reports into one table");
    report->add_option("files", r.files, "Report JSON files")->required()->expected(1, 64);
    report->add_option("--out", r.out, "Merged CSV path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            mos::harness::cmd_generate(g.sim, g.n_common, g.out, std::cout);
        } else if (train->parsed()) {
            mos::harness::cmd_train(t.features, t.opt, t.out, std::cout);
        } else if (eval->parsed()) {
            if (sf->count() > 0) e.opt.split_fraction = e.split_fraction;
            if (ss->count() > 0) e.opt.split_seed = e.seed;
            mos::harness::cmd_eval(e.features, e.model, e.opt, e.out, std::cout);
        } else if (inspect->parsed()) {
            mos::harness::cmd_inspect(i.dataset, i.id, i.opt, i.out, std::cout);
        } else if (report->parsed()) {
            mos::harness::cmd_report(r.files, r.out, std::cout);
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
