// lcc: score inputs, scan bitstring aspect ratios, aggregate directories.
//
// Exit codes: 0 ok, 2 bad input, 3 bad configuration.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "lcc/arecibo.hpp"
#include "lcc/continuous.hpp"
#include "lcc/discrete.hpp"
#include "lcc/frontends.hpp"
#include "lcc/reconstruct.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace lcc;

namespace {

constexpr const char* kReportSchema = "lcc-report/1";
constexpr const char* kScanSchema = "lcc-arecibo/1";
constexpr const char* kBatchSchema = "lcc-batch/1";

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string input;  // path, or empty for gen kinds
    std::string kind;   // text | image | audio | bits | gen:KIND
    std::uint64_t seed = 0;
    std::size_t levels = 4;
    std::vector<std::size_t> patch_sizes = {1, 2, 2, 2};
    std::size_t kmax = 15;
    std::size_t max_sublen = 10;
    std::string model_cost_mode = "full";
    bool overlap = false;
    int precision = 32;
    std::string higher_direct = "labels";
    int restarts = 3;
    int max_iter = 100;
    double tol = 1e-6;
    bool charge_container = true;
    std::size_t budget = 7500;
    bool lowercase = false;
    std::size_t window = 1024;
    std::size_t hop = 512;
    std::string ratio;  // bits kind
    bool compat32 = false;
    std::string force_encoding;
    GenParams gen;
    std::string format = "json";
    std::string output;
};

// Values a report needs to be reproduced, in a fixed order.
json config_echo(const Options& o, const std::string& command) {
    json c;
    c["command"] = command;
    c["input"] = o.input;
    c["kind"] = o.kind;
    c["seed"] = o.seed;
    c["levels"] = o.levels;
    c["patch_sizes"] = o.patch_sizes;
    c["kmax"] = o.kmax;
    c["max_sublen"] = o.max_sublen;
    c["model_cost_mode"] = o.model_cost_mode;
    c["overlap"] = o.overlap;
    c["precision"] = o.precision;
    c["higher_direct"] = o.higher_direct;
    c["restarts"] = o.restarts;
    c["max_iter"] = o.max_iter;
    c["tol"] = o.tol;
    c["charge_container"] = o.charge_container;
    c["budget"] = o.budget;
    c["lowercase"] = o.lowercase;
    c["window"] = o.window;
    c["hop"] = o.hop;
    c["ratio"] = o.ratio;
    c["compat32"] = o.compat32;
    c["force_encoding"] = o.force_encoding;
    c["gen"] = {{"length", o.gen.length}, {"alphabet", o.gen.alphabet}, {"k", o.gen.k},
                {"height", o.gen.height}, {"width", o.gen.width}, {"stripe_width", o.gen.stripe_width},
                {"angle", o.gen.angle}};
    // the variance floor and container charge are fixed conventions, echoed for the record
    c["variance_floor"] = "eps^2/(2*pi)";
    c["codebook_cost"] = "sum len*log2(A+e)";
    return c;
}

template <class T>
void take(const json& c, const char* key, T& out) {
    if (c.contains(key) && !c[key].is_null()) out = c[key].get<T>();
}

void apply_echo(const json& c, Options& o) {
    take(c, "input", o.input);
    take(c, "kind", o.kind);
    take(c, "seed", o.seed);
    take(c, "levels", o.levels);
    take(c, "patch_sizes", o.patch_sizes);
    take(c, "kmax", o.kmax);
    take(c, "max_sublen", o.max_sublen);
    take(c, "model_cost_mode", o.model_cost_mode);
    take(c, "overlap", o.overlap);
    take(c, "precision", o.precision);
    take(c, "higher_direct", o.higher_direct);
    take(c, "restarts", o.restarts);
    take(c, "max_iter", o.max_iter);
    take(c, "tol", o.tol);
    take(c, "charge_container", o.charge_container);
    take(c, "budget", o.budget);
    take(c, "lowercase", o.lowercase);
    take(c, "window", o.window);
    take(c, "hop", o.hop);
    take(c, "ratio", o.ratio);
    take(c, "compat32", o.compat32);
    take(c, "force_encoding", o.force_encoding);
    if (c.contains("gen")) {
        const auto& g = c["gen"];
        take(g, "length", o.gen.length);
        take(g, "alphabet", o.gen.alphabet);
        take(g, "k", o.gen.k);
        take(g, "height", o.gen.height);
        take(g, "width", o.gen.width);
        take(g, "stripe_width", o.gen.stripe_width);
        take(g, "angle", o.gen.angle);
    }
}

double r2(double v) { return std::isfinite(v) ? std::round(v * 100.0) / 100.0 : v; }

json num(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

std::string full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fixed2(double v) {
    if (!std::isfinite(v)) return v > 0 ? "inf" : "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

const char* kBreakdownFields[] = {"model_cost", "idx_cost", "residual_cost", "lcc_score", "total"};

std::vector<double> breakdown_values(const CostBreakdown& b) {
    return {b.model_cost, b.idx_cost, b.residual_cost, b.lcc_score, b.total()};
}

json breakdown_json(const CostBreakdown& b, bool rounded) {
    json j;
    auto v = breakdown_values(b);
    for (std::size_t i = 0; i < v.size(); ++i) j[kBreakdownFields[i]] = rounded ? num(r2(v[i])) : num(v[i]);
    return j;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + "\"";
}

// ---- configuration checks ----

ModelCostMode parse_mode(const std::string& s) {
    if (s == "full") return ModelCostMode::Full;
    if (s == "means-only") return ModelCostMode::MeansOnly;
    throw ConfigError("--model-cost-mode must be full or means-only, got '" + s + "'");
}

Ratio parse_ratio(const std::string& s, const char* flag) {
    auto x = s.find('x');
    try {
        if (x == std::string::npos) throw std::invalid_argument(s);
        std::size_t used = 0;
        unsigned long h = std::stoul(s.substr(0, x), &used);
        if (used != x) throw std::invalid_argument(s);
        std::string rest = s.substr(x + 1);
        unsigned long w = std::stoul(rest, &used);
        if (used != rest.size() || h == 0 || w == 0) throw std::invalid_argument(s);
        return {h, w};
    } catch (const std::exception&) {
        throw ConfigError(std::string(flag) + " expects HEIGHTxWIDTH, got '" + s + "'");
    }
}

std::vector<Ratio> parse_ratios(const std::string& s) {
    std::vector<Ratio> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_ratio(item, "--ratios"));
    if (out.empty()) throw ConfigError("--ratios is empty");
    return out;
}

ContinuousConfig continuous_config(const Options& o) {
    if (o.levels == 0) throw ConfigError("--levels must be at least 1");
    if (o.kmax == 0) throw ConfigError("--kmax must be at least 1");
    if (o.precision < 0 || o.precision > 64) throw ConfigError("--precision must be 0..64");
    ContinuousConfig c;
    c.patch_sizes = o.patch_sizes;
    if (c.patch_sizes.empty() || c.patch_sizes[0] != 1) throw ConfigError("--patch-sizes must start with 1");
    while (c.patch_sizes.size() < o.levels) c.patch_sizes.push_back(2);
    c.max_levels = o.levels;
    c.overlap = o.overlap;
    c.precision_bits = o.precision;
    if (o.higher_direct == "labels") c.higher_direct = DirectCostMode::LabelBits;
    else if (o.higher_direct == "floats") c.higher_direct = DirectCostMode::FloatBits;
    else throw ConfigError("--higher-direct must be labels or floats, got '" + o.higher_direct + "'");
    c.cluster.k_max = o.kmax;
    c.cluster.mode = parse_mode(o.model_cost_mode);
    c.cluster.seed = o.seed;
    c.cluster.restarts = o.restarts;
    c.cluster.max_iter = o.max_iter;
    c.cluster.tol = o.tol;
    return c;
}

SearchConfig search_config(const Options& o) {
    if (o.max_sublen < 2) throw ConfigError("--max-sublen must be at least 2");
    return {o.max_sublen, o.charge_container};
}

std::string gen_kind(const std::string& kind) { return kind.rfind("gen:", 0) == 0 ? kind.substr(4) : ""; }

void check_kind(const std::string& kind) {
    static const std::vector<std::string> direct = {"text", "image", "audio", "bits"};
    if (std::find(direct.begin(), direct.end(), kind) != direct.end()) return;
    static const std::vector<std::string> gens = {"rand-text", "repeat-k", "simp-en", "white-noise-image",
                                                  "stripes", "halves", "prime-modulo"};
    auto g = gen_kind(kind);
    if (!g.empty() && std::find(gens.begin(), gens.end(), g) != gens.end()) return;
    throw ConfigError("--kind must be text, image, audio, bits or gen:KIND, got '" + kind + "'");
}

SignalSource load_source(const Options& o) {
    check_kind(o.kind);
    auto g = gen_kind(o.kind);
    if (!g.empty()) {
        if (!o.input.empty()) throw ConfigError("--kind " + o.kind + " takes no input path");
        try {
            return generate(g, o.gen, o.seed);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("generator parameters: ") + e.what());
        }
    }
    if (o.input.empty()) throw ConfigError("an input path is required for --kind " + o.kind);
    if (!fs::exists(o.input)) throw InputError("no such file: " + o.input);
    if (o.kind == "text") return load_text(o.input, {o.budget, o.lowercase});
    if (o.kind == "image") return load_image(o.input);
    if (o.kind == "audio") {
        if (o.window < 2 || o.hop == 0) throw ConfigError("--window must be >= 2 and --hop >= 1");
        return load_audio(o.input, {.window = o.window, .hop = o.hop});
    }
    return load_bits(o.input);
}

// ---- forced text encodings ----

// {"codebook": [["d", "aa"], ...], "index": "xxgd...", "residual": "cab..."}.
// Letters are input characters; keys are new single characters in creation order.
DiscreteEncoding read_forced_encoding(const std::string& path, const SignalSource& src) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read --force-encoding file " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw InputError("--force-encoding: " + std::string(e.what()));
    }
    std::map<std::string, Symbol> ids;
    for (std::size_t i = 0; i < src.alphabet.size(); ++i) ids[src.alphabet[i]] = static_cast<Symbol>(i);
    DiscreteEncoding e;
    e.base_alphabet = src.text.alphabet_size;
    auto to_symbols = [&](const std::string& s, bool allow_x) {
        std::vector<Symbol> out;
        for (std::size_t i = 0; i < s.size();) {
            std::size_t n = 1;
            auto c = static_cast<unsigned char>(s[i]);
            if (c >= 0xF0) n = 4;
            else if (c >= 0xE0) n = 3;
            else if (c >= 0xC0) n = 2;
            std::string ch = s.substr(i, n);
            i += n;
            if (allow_x && ch == "x" && !ids.count("x")) {
                out.push_back(kXSymbol);
                continue;
            }
            auto it = ids.find(ch);
            if (it == ids.end()) throw InputError("--force-encoding: unknown symbol '" + ch + "'");
            out.push_back(it->second);
        }
        return out;
    };
    try {
        for (const auto& entry : j.at("codebook")) {
            auto key = entry.at(0).get<std::string>();
            auto value = to_symbols(entry.at(1).get<std::string>(), false);
            if (ids.count(key)) throw InputError("--force-encoding: key '" + key + "' is already a symbol");
            Symbol k = e.next_key();
            e.codebook.entries.push_back({k, value});
            ids[key] = k;
        }
        e.index = to_symbols(j.at("index").get<std::string>(), true);
        for (Symbol s : to_symbols(j.at("residual").get<std::string>(), false)) {
            if (s >= e.base_alphabet) throw InputError("--force-encoding: residual holds a key");
            e.residual.push_back(s);
        }
    } catch (const json::exception& ex) {
        throw InputError("--force-encoding: " + std::string(ex.what()));
    }
    return e;
}

std::string render(const std::vector<Symbol>& v, const SignalSource& src, std::size_t base) {
    std::string out;
    for (Symbol s : v) {
        if (s == kXSymbol) out += "[x]";
        else if (s < base) out += s < src.alphabet.size() ? src.alphabet[s] : "?";
        else out += "[k" + std::to_string(s - base) + "]";
    }
    return out;
}

// ---- scoring ----

struct Scored {
    json report;
    CostBreakdown breakdown;
};

Scored score_source(const SignalSource& src, const Options& o) {
    auto t0 = std::chrono::steady_clock::now();
    json rep;
    rep["schema"] = kReportSchema;
    json input = {{"source", src.provenance.source}, {"kind", kind_name(src.kind)}};
    for (const auto& [k, v] : src.provenance.params) input["params"][k] = v;
    rep["input"] = input;
    rep["config"] = config_echo(o, "score");
    CostBreakdown b;

    if (src.kind == SignalKind::Text) {
        auto cfg = search_config(o);
        DiscreteEncoding enc = o.force_encoding.empty() ? greedy_alias_search(src.text, cfg)
                                                        : read_forced_encoding(o.force_encoding, src);
        bool ok = false;
        try {
            ok = decode(enc) == src.text.symbols;
        } catch (const DecodeError& e) {
            throw InputError(std::string("--force-encoding does not decode: ") + e.what());
        }
        if (!o.force_encoding.empty() && !ok) throw InputError("--force-encoding does not reproduce the input");
        b = encoding_cost(enc);
        json cb = json::array();
        for (std::size_t i = 0; i < enc.codebook.entries.size(); ++i) {
            const auto& en = enc.codebook.entries[i];
            cb.push_back({{"key", "k" + std::to_string(i)},
                          {"value", render(en.value, src, enc.base_alphabet)},
                          {"expands_to", render(decode({enc.base_alphabet, enc.codebook, {en.key}, {}}), src,
                                                enc.base_alphabet)},
                          {"bits", codebook_entry_cost(en.value.size(), enc.base_alphabet, i)}});
        }
        double container = container_cost(enc.codebook, enc.index.size());
        rep["codebook"] = {{"forced", !o.force_encoding.empty()},
                           {"entries", cb},
                           {"alphabet_size", enc.base_alphabet},
                           {"index_length", enc.index.size()},
                           {"residual_length", enc.residual.size()},
                           {"container_bits", r2(container)},
                           {"container_bits_full", container}};
        rep["decode_check"] = ok;
    } else {
        HierarchicalEncoding enc;
        DataTensor data;
        if (src.kind == SignalKind::Bitgrid) {
            if (o.ratio.empty()) throw ConfigError("--kind bits needs --ratio HEIGHTxWIDTH (or use the arecibo command)");
            Ratio r = parse_ratio(o.ratio, "--ratio");
            if (r.height * r.width < src.bits.size())
                throw ConfigError("--ratio " + o.ratio + " holds fewer cells than the input has bits");
            ScanConfig sc{.pad_cap = 1.0, .compat32 = o.compat32, .continuous = continuous_config(o)};
            auto grid = make_grid(src.bits, r, o.seed);
            data = grid.tensor();
            enc = lcc_continuous(data, scan_continuous_config(sc));
            rep["grid"] = {{"height", r.height}, {"width", r.width}, {"pad_bits", grid.pad_bits}};
        } else {
            data = src.tensor;
            enc = lcc_continuous(data, continuous_config(o));
        }
        b = enc.breakdown;
        json levels = json::array();
        for (std::size_t i = 0; i < enc.levels.size(); ++i) {
            const auto& lv = enc.levels[i];
            json l = {{"level", i + 1},
                      {"patch", lv.patch},
                      {"stride", lv.stride},
                      {"grid_shape", lv.grid_shape},
                      {"k", lv.partition.k()},
                      {"outliers", lv.partition.outliers()},
                      {"uncovered_bits", lv.uncovered_bits}};
            l["breakdown"] = breakdown_json(lv.costs, true);
            l["breakdown_full"] = breakdown_json(lv.costs, false);
            levels.push_back(l);
        }
        rep["precision_bits"] = enc.precision.bits_per_scalar;
        rep["levels"] = levels;
        auto cr = compression_report(data, enc);
        rep["compression"] = {{"original_bits", cr.original_bits},  {"lossless_bits", cr.lossless_bits},
                              {"lossy_bits", cr.lossy_bits},        {"container_bits", cr.container_bits},
                              {"lossless_ratio", num(cr.lossless_ratio)}, {"lossy_ratio", num(cr.lossy_ratio)}};
    }
    rep["breakdown"] = breakdown_json(b, true);
    rep["breakdown_full"] = breakdown_json(b, false);
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    rep["timing_ms"] = r2(ms);
    return {rep, b};
}

std::string score_csv(const json& rep, const CostBreakdown& b) {
    std::ostringstream out;
    out << "schema,source,kind";
    for (auto f : kBreakdownFields) out << ',' << f;
    for (auto f : kBreakdownFields) out << ',' << f << "_full";
    out << '\n';
    out << kReportSchema << ',' << csv_quote(rep["input"]["source"].get<std::string>()) << ','
        << rep["input"]["kind"].get<std::string>();
    auto v = breakdown_values(b);
    for (double x : v) out << ',' << fixed2(x);
    for (double x : v) out << ',' << full(x);
    out << '\n';
    return out.str();
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw InputError("cannot write --output " + path);
    f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---- batch ----

std::string kind_for_extension(const fs::path& p) {
    auto ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".txt") return "text";
    if (ext == ".ppm" || ext == ".pgm" || ext == ".png") return "image";
    if (ext == ".wav") return "audio";
    if (ext == ".bits" || ext == ".bin") return "bits";
    return "unknown(" + ext + ")";
}

struct BatchRow {
    std::string name;
    CostBreakdown b;
};

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// Population standard deviation.
double std_of(const std::vector<double>& v) {
    double m = mean_of(v), s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size()));
}

int run_batch(Options o, const std::string& dir, std::size_t count, unsigned threads) {
    check_kind(o.kind);
    std::vector<Options> jobs;
    auto g = gen_kind(o.kind);
    if (!g.empty()) {
        if (!dir.empty()) throw ConfigError("--kind " + o.kind + " takes --count, not a directory");
        if (count == 0) throw ConfigError("--count must be at least 1 for generated batches");
        for (std::size_t i = 0; i < count; ++i) {
            Options j = o;
            j.seed = o.seed + i;
            jobs.push_back(j);
        }
    } else {
        if (dir.empty()) throw ConfigError("batch needs a directory for --kind " + o.kind);
        if (!fs::is_directory(dir)) throw InputError("not a directory: " + dir);
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(dir))
            if (e.is_regular_file() && e.path().filename().string()[0] != '.') files.push_back(e.path());
        if (files.empty()) throw InputError("empty directory: " + dir);
        std::sort(files.begin(), files.end());
        for (const auto& f : files) {
            auto k = kind_for_extension(f);
            bool fits = k == o.kind || (o.kind == "bits" && k == "text");
            if (!fits)
                throw ConfigError("--kind " + o.kind + " but " + f.filename().string() + " looks like " + k +
                                  "; a batch holds one kind");
            Options j = o;
            j.input = f.string();
            jobs.push_back(j);
        }
    }

    std::vector<BatchRow> rows(jobs.size());
    std::vector<std::string> errors(jobs.size());
    std::vector<int> codes(jobs.size(), 0);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            try {
                auto src = load_source(jobs[i]);
                auto s = score_source(src, jobs[i]);
                rows[i] = {jobs[i].input.empty() ? o.kind + "#" + std::to_string(jobs[i].seed)
                                                 : fs::path(jobs[i].input).filename().string(),
                           s.breakdown};
            } catch (const ConfigError& e) {
                errors[i] = e.what();
                codes[i] = 3;
            } catch (const std::exception& e) {
                errors[i] = e.what();
                codes[i] = 2;
            }
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(jobs.size()));
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    for (std::size_t i = 0; i < jobs.size(); ++i)
        if (codes[i]) {
            std::cerr << "lcc batch: " << (jobs[i].input.empty() ? o.kind : jobs[i].input) << ": " << errors[i]
                      << "\n";
            return codes[i];
        }

    std::vector<std::vector<double>> cols(5);
    for (const auto& r : rows) {
        auto v = breakdown_values(r.b);
        for (std::size_t c = 0; c < 5; ++c) cols[c].push_back(v[c]);
    }
    if (o.format == "json") {
        json j;
        j["schema"] = kBatchSchema;
        j["config"] = config_echo(o, "batch");
        j["config"]["input"] = dir;
        j["config"]["count"] = count;
        json arr = json::array();
        for (const auto& r : rows)
            arr.push_back({{"name", r.name}, {"breakdown", breakdown_json(r.b, true)},
                           {"breakdown_full", breakdown_json(r.b, false)}});
        j["rows"] = arr;
        for (std::size_t c = 0; c < 5; ++c) {
            j["summary"]["mean"][kBreakdownFields[c]] = r2(mean_of(cols[c]));
            j["summary"]["std"][kBreakdownFields[c]] = r2(std_of(cols[c]));
            j["summary_full"]["mean"][kBreakdownFields[c]] = mean_of(cols[c]);
            j["summary_full"]["std"][kBreakdownFields[c]] = std_of(cols[c]);
        }
        j["summary"]["count"] = rows.size();
        emit(dump(j), o.output);
        return 0;
    }
    std::ostringstream out;
    out << "name";
    for (auto f : kBreakdownFields) out << ',' << f;
    for (auto f : kBreakdownFields) out << ',' << f << "_full";
    out << '\n';
    for (const auto& r : rows) {
        out << csv_quote(r.name);
        auto v = breakdown_values(r.b);
        for (double x : v) out << ',' << fixed2(x);
        for (double x : v) out << ',' << full(x);
        out << '\n';
    }
    out << "mean";
    for (const auto& c : cols) out << ',' << fixed2(mean_of(c));
    for (const auto& c : cols) out << ',' << full(mean_of(c));
    out << "\nstd";
    for (const auto& c : cols) out << ',' << fixed2(std_of(c));
    for (const auto& c : cols) out << ',' << full(std_of(c));
    out << "\nsummary";
    for (const auto& c : cols) out << ',' << csv_quote(fixed2(mean_of(c)) + " (" + fixed2(std_of(c)) + ")");
    for (std::size_t c = 0; c < cols.size(); ++c) out << ',';
    out << '\n';
    emit(out.str(), o.output);
    return 0;
}

// ---- arecibo ----

struct ScanOptions {
    std::string ratios;
    int baseline_trials = 20;
    double pad_cap = 0.05;
    std::string csv_out;
    unsigned threads = 0;
};

int run_arecibo(const Options& o, const ScanOptions& so) {
    if (o.input.empty()) throw ConfigError("arecibo needs a bit file");
    if (so.baseline_trials < 0) throw ConfigError("--baseline-trials must be >= 0");
    if (!(so.pad_cap >= 0.0)) throw ConfigError("--pad-cap must be >= 0");
    std::vector<Ratio> ratios;
    if (!so.ratios.empty()) ratios = parse_ratios(so.ratios);
    if (!fs::exists(o.input)) throw InputError("no such file: " + o.input);
    auto src = load_bits(o.input);
    if (ratios.empty()) ratios = default_ratio_set(src.bits.size(), so.pad_cap);
    ScanConfig sc{.pad_cap = so.pad_cap, .compat32 = o.compat32, .continuous = continuous_config(o),
                  .threads = so.threads};
    auto res = scan_aspect_ratios(src.bits, ratios, o.seed, sc);
    std::optional<Baseline> base;
    if (so.baseline_trials > 0) base = random_baseline(src.bits.size(), ratios, so.baseline_trials, o.seed + 1, sc);

    std::ostringstream csv;
    csv << "height,width,pad_bits,levels,model_cost,idx_cost,residual_cost,lcc_score,rank,lcc_score_full"
        << (base ? ",above_baseline_max" : "") << '\n';
    json recs = json::array();
    for (const auto& r : res.records) {
        const auto& b = r.breakdown;
        csv << r.ratio.height << ',' << r.ratio.width << ',' << r.pad_bits << ',' << r.levels << ','
            << fixed2(b.model_cost) << ',' << fixed2(b.idx_cost) << ',' << fixed2(b.residual_cost) << ','
            << fixed2(b.lcc_score) << ',' << res.rank(r.ratio) << ',' << full(b.lcc_score);
        if (base) csv << ',' << (b.lcc_score > base->max ? "true" : "false");
        csv << '\n';
        json j = {{"height", r.ratio.height}, {"width", r.ratio.width}, {"pad_bits", r.pad_bits},
                  {"levels", r.levels},       {"rank", res.rank(r.ratio)}};
        j["breakdown"] = breakdown_json(b, true);
        j["breakdown_full"] = breakdown_json(b, false);
        recs.push_back(j);
    }
    if (!so.csv_out.empty()) {
        std::ofstream f(so.csv_out);
        if (!f) throw InputError("cannot write --csv-out " + so.csv_out);
        f << csv.str();
    }
    if (o.format == "csv") {
        emit(csv.str(), o.output);
        return 0;
    }
    json j;
    j["schema"] = kScanSchema;
    j["input"] = {{"source", o.input}, {"bits", src.bits.size()}};
    j["config"] = config_echo(o, "arecibo");
    j["config"]["ratios"] = so.ratios.empty() ? "default" : so.ratios;
    j["config"]["baseline_trials"] = so.baseline_trials;
    j["config"]["pad_cap"] = so.pad_cap;
    j["precision_bits"] = res.precision_bits;
    j["best"] = {{"height", res.best.height}, {"width", res.best.width}};
    j["mean_pad"] = res.mean_pad;
    j["records"] = recs;
    j["notes"] = res.notes;
    if (base) {
        j["baseline"] = {{"trials", so.baseline_trials}, {"seed", o.seed + 1}, {"max", r2(base->max)},
                         {"p95", r2(base->p95)},           {"max_full", base->max}, {"p95_full", base->p95},
                         {"trial_max", base->trial_max}};
    }
    emit(dump(j), o.output);
    return 0;
}

// ---- argument plumbing ----

void add_common(CLI::App* sub, Options& o) {
    sub->add_option("--seed", o.seed, "RNG seed (falls back to LCC_SEED, then 0)");
    sub->add_option("--levels", o.levels, "maximum hierarchy levels");
    sub->add_option("--patch-sizes", o.patch_sizes, "patch size per level, first must be 1")->delimiter(',');
    sub->add_option("--kmax", o.kmax, "largest K tried per level");
    sub->add_option("--model-cost-mode", o.model_cost_mode, "full or means-only");
    sub->add_flag("--overlap", o.overlap, "overlapping patches above level 1");
    sub->add_option("--precision", o.precision, "bits per stored scalar, 0 infers");
    sub->add_option("--higher-direct", o.higher_direct, "labels or floats");
    sub->add_option("--restarts", o.restarts, "k-means++ restarts per K");
    sub->add_option("--max-iter", o.max_iter, "EM iterations");
    sub->add_option("--tol", o.tol, "EM tolerance");
    sub->add_flag("--compat32", o.compat32, "score bit grids at 32-bit precision");
    sub->add_option("--format", o.format, "json or csv");
    sub->add_option("-o,--output", o.output, "write here instead of stdout");
}

void add_scoring(CLI::App* sub, Options& o) {
    sub->add_option("--kind", o.kind, "text, image, audio, bits or gen:KIND");
    sub->add_option("--max-sublen", o.max_sublen, "longest substring the text search aliases");
    sub->add_flag("!--no-container", o.charge_container, "leave container bits out of the text objective");
    sub->add_option("--budget", o.budget, "text characters kept after normalisation, 0 keeps all");
    sub->add_flag("--lowercase", o.lowercase, "lowercase text before scoring");
    sub->add_option("--window", o.window, "STFT window");
    sub->add_option("--hop", o.hop, "STFT hop");
    sub->add_option("--ratio", o.ratio, "grid for --kind bits, HEIGHTxWIDTH");
    sub->add_option("--length", o.gen.length, "generated text length");
    sub->add_option("--alphabet", o.gen.alphabet, "rand-text alphabet size");
    sub->add_option("--k", o.gen.k, "repeat-k unit length");
    sub->add_option("--height", o.gen.height, "generated image height");
    sub->add_option("--width", o.gen.width, "generated image width");
    sub->add_option("--stripe-width", o.gen.stripe_width, "stripes band width");
    sub->add_option("--angle", o.gen.angle, "stripes/halves angle in radians");
}

// Reads --config before parsing so explicit flags override the echo.
void preload_config(int argc, char** argv, Options& o) {
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i], path;
        if (a == "--config" && i + 1 < argc) path = argv[i + 1];
        else if (a.rfind("--config=", 0) == 0) path = a.substr(9);
        else continue;
        std::ifstream in(path);
        if (!in) throw ConfigError("--config: cannot read " + path);
        json j;
        try {
            j = json::parse(in);
            apply_echo(j.contains("config") ? j["config"] : j, o);
        } catch (const json::exception& e) {
            throw ConfigError("--config: " + std::string(e.what()));
        }
    }
}

bool seed_from_env(Options& o) {
    const char* env = std::getenv("LCC_SEED");
    if (!env || !*env) return false;
    try {
        std::size_t used = 0;
        std::string s = env;
        o.seed = std::stoull(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
    } catch (const std::exception&) {
        throw ConfigError(std::string("LCC_SEED must be a non-negative integer, got '") + env + "'");
    }
    return true;
}

int run(int argc, char** argv) {
    Options o;
    ScanOptions so;
    std::string batch_dir;
    std::size_t batch_count = 0;
    unsigned batch_threads = 0;
    std::string config_path;

    CLI::App app{"Local compositional complexity scores"};
    app.require_subcommand(1);

    auto* score = app.add_subcommand("score", "score one input and print a report");
    score->add_option("input", o.input, "input file (omit for gen:KIND)");
    add_common(score, o);
    add_scoring(score, o);
    score->add_option("--force-encoding", o.force_encoding, "text: score this encoding instead of searching");
    score->add_option("--config", config_path, "report or config echo to reproduce");

    auto* arec = app.add_subcommand("arecibo", "scan the aspect ratios of a bitstring");
    arec->add_option("input", o.input, "bit file ('0'/'1' text)");
    add_common(arec, o);
    arec->add_option("--ratios", so.ratios, "comma-separated HEIGHTxWIDTH list (default: minimal-pad set)");
    arec->add_option("--baseline-trials", so.baseline_trials, "random bitstrings for the baseline, 0 skips");
    arec->add_option("--pad-cap", so.pad_cap, "largest pad fraction scanned");
    arec->add_option("--csv-out", so.csv_out, "also write the CSV table here");
    arec->add_option("--threads", so.threads, "worker threads, 0 uses all cores");

    auto* batch = app.add_subcommand("batch", "score every file of one kind in a directory");
    batch->add_option("dir", batch_dir, "input directory (omit for gen:KIND)");
    add_common(batch, o);
    add_scoring(batch, o);
    batch->add_option("--count", batch_count, "generated inputs, seeds seed..seed+count-1");
    batch->add_option("--threads", batch_threads, "worker threads, 0 uses all cores");

    o.format = "json";
    seed_from_env(o);
    preload_config(argc, argv, o);
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "lcc: " << e.what() << "\n";
        return 3;
    }
    if (o.format != "json" && o.format != "csv") throw ConfigError("--format must be json or csv, got '" + o.format + "'");

    // Flags are checked before any input is read, so a config error wins over a bad path.
    parse_mode(o.model_cost_mode);
    continuous_config(o);
    if (*score || *batch) {
        if (o.kind.empty()) throw ConfigError("--kind is required");
        check_kind(o.kind);
        search_config(o);
        if (!o.ratio.empty()) parse_ratio(o.ratio, "--ratio");
    }
    if (*score) {
        auto src = load_source(o);
        auto s = score_source(src, o);
        emit(o.format == "json" ? dump(s.report) : score_csv(s.report, s.breakdown), o.output);
        return 0;
    }
    if (*arec) return run_arecibo(o, so);
    return run_batch(o, batch_dir, batch_count, batch_threads);
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ConfigError& e) {
        std::cerr << "lcc: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "lcc: " << e.what() << "\n";
        return 2;
    }
}
