#include "mos/dataset_io.hpp"

#include <bit>
#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "container payloads are little-endian; byte swapping is not implemented");

namespace mos::io {

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_double_list(const std::vector<double>& vs) {
    std::string out;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (i) out += ',';
        out += fmt_double(vs[i]);
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

std::vector<std::size_t> parse_size_list(const std::string& s) {
    std::vector<std::size_t> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoull(item));
    return out;
}

class Writer {
public:
    Writer(const std::string& path, const std::string& magic) : f_(path, std::ios::binary) {
        if (!f_) throw std::runtime_error("cannot open for writing: " + path);
        f_ << magic << '\n';
    }
    void header(const std::string& key, const std::string& value) {
        f_ << key << '=' << value << '\n';
    }
    void header(const std::string& key, std::size_t v) { header(key, std::to_string(v)); }
    void header(const std::string& key, double v) { header(key, fmt_double(v)); }
    void end_header() { f_ << "end_header\n"; }
    void raw(const void* p, std::size_t bytes) {
        f_.write(static_cast<const char*>(p), static_cast<std::streamsize>(bytes));
    }
    void f64(double v) { raw(&v, sizeof v); }
    void u32(std::uint32_t v) { raw(&v, sizeof v); }
    void close() {
        f_.close();
        if (!f_) throw std::runtime_error("write failed");
    }

private:
    std::ofstream f_;
};

class Reader {
public:
    Reader(const std::string& path, const std::string& magic) : f_(path, std::ios::binary) {
        if (!f_) throw std::runtime_error("cannot open for reading: " + path);
        std::string line;
        if (!std::getline(f_, line) || line != magic)
            throw std::runtime_error(path + ": not a " + magic + " file");
        while (std::getline(f_, line)) {
            if (line == "end_header") return;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw std::runtime_error(path + ": malformed header line: " + line);
            kv_[line.substr(0, eq)] = line.substr(eq + 1);
        }
        throw std::runtime_error(path + ": missing end_header");
    }

    const std::string& get(const std::string& key) const {
        const auto it = kv_.find(key);
        if (it == kv_.end()) throw std::runtime_error("missing header field: " + key);
        return it->second;
    }
    std::size_t get_size(const std::string& key) const { return std::stoull(get(key)); }
    double get_double(const std::string& key) const { return std::stod(get(key)); }
    const std::map<std::string, std::string>& all() const { return kv_; }

    void raw(void* p, std::size_t bytes) {
        f_.read(static_cast<char*>(p), static_cast<std::streamsize>(bytes));
        if (f_.gcount() != static_cast<std::streamsize>(bytes))
            throw std::runtime_error("unexpected end of payload");
    }
    double f64() {
        double v;
        raw(&v, sizeof v);
        return v;
    }
    std::uint32_t u32() {
        std::uint32_t v;
        raw(&v, sizeof v);
        return v;
    }

private:
    std::ifstream f_;
    std::map<std::string, std::string> kv_;
};

void write_sim_config(Writer& w, const chansim::SimConfig& cfg) {
    w.header("m_antennas", cfg.m_antennas);
    w.header("n_sub", cfg.n_sub);
    w.header("k_smooth", cfg.k_smooth);
    w.header("l_max", cfg.l_max);
    w.header("samples_per_class", cfg.samples_per_class);
    w.header("snr_db", cfg.snr_db);
    w.header("carriers_hz", fmt_double_list(cfg.carriers_hz));
    w.header("seed", cfg.seed);
}

chansim::SimConfig read_sim_config(const Reader& r) {
    chansim::SimConfig cfg;
    cfg.m_antennas = r.get_size("m_antennas");
    cfg.n_sub = r.get_size("n_sub");
    cfg.k_smooth = r.get_size("k_smooth");
    cfg.l_max = r.get_size("l_max");
    cfg.samples_per_class = r.get_size("samples_per_class");
    cfg.snr_db = r.get_double("snr_db");
    cfg.carriers_hz = parse_double_list(r.get("carriers_hz"));
    cfg.seed = std::stoull(r.get("seed"));
    return cfg;
}

} // namespace

void write_dataset(const std::string& path, const Dataset& ds) {
    Writer w(path, "MOSDATA 1");
    write_sim_config(w, ds.cfg);
    w.header("n_samples", ds.samples.size());
    w.end_header();
    for (const chansim::ChannelSample& cs : ds.samples) {
        w.u32(static_cast<std::uint32_t>(cs.model_order));
        w.f64(cs.carrier_hz);
        w.f64(cs.snr_db);
        for (const chansim::PathParams& p : cs.paths) {
            w.f64(p.amplitude.real());
            w.f64(p.amplitude.imag());
            w.f64(p.delay_samples);
            w.f64(p.doa_deg);
        }
        for (const linalg::cplx& x : cs.h.entries()) {
            w.f64(x.real());
            w.f64(x.imag());
        }
    }
    w.close();
}

Dataset read_dataset(const std::string& path) {
    Reader r(path, "MOSDATA 1");
    Dataset ds;
    ds.cfg = read_sim_config(r);
    const std::size_t n = r.get_size("n_samples");
    ds.samples.reserve(n);
    for (std::size_t s = 0; s < n; ++s) {
        chansim::ChannelSample cs;
        const std::uint32_t l = r.u32();
        cs.model_order = l;
        cs.carrier_hz = r.f64();
        cs.snr_db = r.f64();
        cs.paths.resize(l);
        for (auto& p : cs.paths) {
            const double re = r.f64(), im = r.f64();
            p.amplitude = {re, im};
            p.delay_samples = r.f64();
            p.doa_deg = r.f64();
        }
        cs.h = linalg::Matrix(ds.cfg.m_antennas, ds.cfg.n_sub);
        for (auto& x : cs.h.entries()) {
            const double re = r.f64(), im = r.f64();
            x = {re, im};
        }
        ds.samples.push_back(std::move(cs));
    }
    return ds;
}

void write_features(const std::string& path, const FeatureSet& fs) {
    if (fs.g.size() != fs.labels.size())
        throw std::invalid_argument("write_features: g/label count mismatch");
    Writer w(path, "MOSFEAT 1");
    w.header("kind", fs.kind);
    w.header("n_common", fs.n_common);
    w.header("d_cols", fs.d_cols);
    w.header("l_max", fs.l_max);
    std::string sizes;
    for (std::size_t i = 0; i < fs.mode_sizes.size(); ++i) {
        if (i) sizes += ',';
        sizes += std::to_string(fs.mode_sizes[i]);
    }
    w.header("mode_sizes", sizes);
    write_sim_config(w, fs.sim);
    w.header("n_samples", fs.g.size());
    w.end_header();
    for (std::size_t s = 0; s < fs.g.size(); ++s) {
        const auto& lv = fs.labels[s];
        const auto& g = fs.g[s];
        if (lv.bits.size() != fs.n_common || g.rows() != fs.n_common || g.cols() != fs.d_cols)
            throw std::invalid_argument("write_features: sample shape mismatch");
        w.u32(static_cast<std::uint32_t>(lv.model_order));
        w.raw(lv.bits.data(), lv.bits.size());
        w.raw(g.entries().data(), g.size() * sizeof(double));
    }
    w.close();
}

FeatureSet read_features(const std::string& path) {
    Reader r(path, "MOSFEAT 1");
    FeatureSet fs;
    fs.kind = r.get("kind");
    fs.n_common = r.get_size("n_common");
    fs.d_cols = r.get_size("d_cols");
    fs.l_max = r.get_size("l_max");
    fs.mode_sizes = parse_size_list(r.get("mode_sizes"));
    fs.sim = read_sim_config(r);
    const std::size_t n = r.get_size("n_samples");
    fs.g.reserve(n);
    fs.labels.reserve(n);
    for (std::size_t s = 0; s < n; ++s) {
        features::LabelVector lv;
        lv.model_order = r.u32();
        lv.bits.resize(fs.n_common);
        r.raw(lv.bits.data(), fs.n_common);
        linalg::RealMatrix g(fs.n_common, fs.d_cols);
        r.raw(g.entries().data(), g.size() * sizeof(double));
        fs.labels.push_back(std::move(lv));
        fs.g.push_back(std::move(g));
    }
    return fs;
}

namespace {

const char* kind_name(nn::LayerKind k) { return k == nn::LayerKind::conv1d ? "conv1d" : "dense"; }
const char* act_name(nn::Activation a) {
    switch (a) {
    case nn::Activation::relu: return "relu";
    case nn::Activation::sigmoid: return "sigmoid";
    case nn::Activation::softmax: return "softmax";
    case nn::Activation::none: return "none";
    }
    return "none";
}
nn::Activation act_from(const std::string& s) {
    if (s == "relu") return nn::Activation::relu;
    if (s == "sigmoid") return nn::Activation::sigmoid;
    if (s == "softmax") return nn::Activation::softmax;
    if (s == "none") return nn::Activation::none;
    throw std::runtime_error("unknown activation: " + s);
}

} // namespace

void save_model(const std::string& path, const nn::NNModel& m,
                const std::map<std::string, std::string>& extra) {
    Writer w(path, "MOSNN 1");
    w.header("input_len", m.input_len());
    w.header("input_channels", m.input_channels());
    w.header("n_layers", m.layers().size());
    for (std::size_t i = 0; i < m.layers().size(); ++i) {
        const nn::LayerSpec& spec = m.layers()[i];
        w.header("layer" + std::to_string(i),
                 std::string(kind_name(spec.kind)) + ',' + std::to_string(spec.units) + ',' +
                     std::to_string(spec.filter_size) + ',' + act_name(spec.activation));
    }
    for (const auto& [key, value] : extra) {
        if (key.rfind("layer", 0) == 0 || key == "input_len" || key == "input_channels" ||
            key == "n_layers")
            throw std::invalid_argument("save_model: extra key collides with model fields");
        w.header(key, value);
    }
    w.end_header();
    for (std::size_t li = 0; li < m.layers().size(); ++li) {
        w.raw(m.kernels()[li].data(), m.kernels()[li].size() * sizeof(double));
        w.raw(m.biases()[li].data(), m.biases()[li].size() * sizeof(double));
    }
    w.close();
}

nn::NNModel load_model(const std::string& path, std::map<std::string, std::string>* extra) {
    Reader r(path, "MOSNN 1");
    const std::size_t input_len = r.get_size("input_len");
    const std::size_t input_channels = r.get_size("input_channels");
    const std::size_t n_layers = r.get_size("n_layers");
    std::vector<nn::LayerSpec> specs;
    for (std::size_t i = 0; i < n_layers; ++i) {
        const std::string line = r.get("layer" + std::to_string(i));
        std::stringstream ss(line);
        std::string kind, units, filter, act;
        std::getline(ss, kind, ',');
        std::getline(ss, units, ',');
        std::getline(ss, filter, ',');
        std::getline(ss, act, ',');
        nn::LayerSpec spec;
        spec.kind = kind == "conv1d" ? nn::LayerKind::conv1d : nn::LayerKind::dense;
        spec.units = std::stoull(units);
        spec.filter_size = std::stoull(filter);
        spec.activation = act_from(act);
        specs.push_back(spec);
    }
    if (extra) {
        *extra = r.all();
    }
    nn::NNModel m(input_len, input_channels, std::move(specs));
    for (std::size_t li = 0; li < n_layers; ++li) {
        r.raw(m.kernels()[li].data(), m.kernels()[li].size() * sizeof(double));
        r.raw(m.biases()[li].data(), m.biases()[li].size() * sizeof(double));
    }
    return m;
}

} // namespace mos::io
