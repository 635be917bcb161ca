#include "lcc/frontends.hpp"

#include <fftw3.h>
#include <png.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/ustring.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <unordered_map>

namespace lcc {

const char* kind_name(SignalKind k) {
    switch (k) {
        case SignalKind::Text: return "text";
        case SignalKind::Image: return "image";
        case SignalKind::Audio: return "audio";
        case SignalKind::Bitgrid: return "bitgrid";
    }
    return "unknown";
}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string extension(const std::string& path) {
    auto dot = path.find_last_of('.');
    if (dot == std::string::npos) return "";
    std::string e = path.substr(dot + 1);
    std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return std::tolower(c); });
    return e;
}

}  // namespace

SignalSource text_from_utf8(const std::string& utf8, const TextConfig& cfg, const std::string& source) {
    UErrorCode status = U_ZERO_ERROR;
    std::vector<UChar> buf(utf8.size() + 1);
    int32_t len16 = 0;
    u_strFromUTF8(buf.data(), static_cast<int32_t>(buf.size()), &len16, utf8.data(),
                  static_cast<int32_t>(utf8.size()), &status);
    if (U_FAILURE(status)) throw InputError("invalid UTF-8 in " + (source.empty() ? "input" : source));
    icu::UnicodeString raw(buf.data(), len16);
    const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
    icu::UnicodeString norm = nfc->normalize(raw, status);
    if (U_FAILURE(status)) throw InputError("normalisation failed for " + source);
    if (cfg.lowercase) norm.toLower();

    SignalSource out;
    out.kind = SignalKind::Text;
    std::unordered_map<UChar32, Symbol> ids;
    std::size_t chars = 0;
    for (int32_t i = 0; i < norm.length(); i = norm.moveIndex32(i, 1)) {
        if (cfg.budget && chars >= cfg.budget) break;
        UChar32 cp = norm.char32At(i);
        auto [it, fresh] = ids.emplace(cp, static_cast<Symbol>(ids.size()));
        if (fresh) {
            std::string s;
            icu::UnicodeString(cp).toUTF8String(s);
            out.alphabet.push_back(s);
        }
        out.text.symbols.push_back(it->second);
        ++chars;
    }
    if (out.text.symbols.empty()) throw InputError("empty text in " + source);
    out.text.alphabet_size = ids.size();
    out.provenance.source = source;
    out.provenance.params = {{"normalization", "NFC"},
                             {"budget", std::to_string(cfg.budget)},
                             {"lowercase", cfg.lowercase ? "true" : "false"},
                             {"alphabet_size", std::to_string(ids.size())},
                             {"characters", std::to_string(chars)}};
    return out;
}

SignalSource load_text(const std::string& path, const TextConfig& cfg) {
    std::string bytes = read_file(path);
    if (bytes.empty()) throw InputError("empty file " + path);
    return text_from_utf8(bytes, cfg, path);
}

namespace {

DataTensor read_pnm(const std::string& path) {
    std::string bytes = read_file(path);
    std::size_t pos = 0;
    auto skip_ws = [&]() {
        while (pos < bytes.size()) {
            if (bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
                ++pos;
            } else {
                break;
            }
        }
    };
    auto next_int = [&]() -> long {
        skip_ws();
        std::size_t start = pos;
        while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) ++pos;
        if (start == pos) throw InputError("malformed header in " + path);
        return std::stol(bytes.substr(start, pos - start));
    };
    if (bytes.size() < 2 || bytes[0] != 'P') throw InputError("not a PNM file: " + path);
    char fmt = bytes[1];
    if (fmt != '2' && fmt != '3' && fmt != '5' && fmt != '6') throw InputError("unsupported PNM variant in " + path);
    pos = 2;
    long w = next_int(), h = next_int(), maxval = next_int();
    if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 65535) throw InputError("bad dimensions in " + path);
    std::size_t ch = (fmt == '3' || fmt == '6') ? 3 : 1;
    std::size_t count = static_cast<std::size_t>(w * h) * ch;
    DataTensor t;
    t.shape = {static_cast<std::size_t>(h), static_cast<std::size_t>(w)};
    t.channels = ch;
    t.values.resize(count);
    if (fmt == '2' || fmt == '3') {
        for (std::size_t i = 0; i < count; ++i) t.values[i] = static_cast<double>(next_int()) / maxval;
    } else {
        ++pos;  // single whitespace after maxval
        std::size_t bps = maxval < 256 ? 1 : 2;
        if (bytes.size() < pos + count * bps) throw InputError("truncated raster in " + path);
        for (std::size_t i = 0; i < count; ++i) {
            unsigned v = bps == 1 ? static_cast<unsigned char>(bytes[pos + i])
                                  : (static_cast<unsigned char>(bytes[pos + 2 * i]) << 8) |
                                        static_cast<unsigned char>(bytes[pos + 2 * i + 1]);
            t.values[i] = static_cast<double>(v) / maxval;
        }
    }
    return t;
}

DataTensor read_png(const std::string& path) {
    png_image img;
    std::memset(&img, 0, sizeof img);
    img.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&img, path.c_str())) throw InputError("cannot read PNG " + path);
    bool color = img.format & PNG_FORMAT_FLAG_COLOR;
    img.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    std::vector<png_byte> buf(PNG_IMAGE_SIZE(img));
    if (!png_image_finish_read(&img, nullptr, buf.data(), 0, nullptr)) {
        png_image_free(&img);
        throw InputError("cannot decode PNG " + path);
    }
    DataTensor t;
    t.shape = {img.height, img.width};
    t.channels = color ? 3 : 1;
    t.values.resize(buf.size());
    for (std::size_t i = 0; i < buf.size(); ++i) t.values[i] = buf[i] / 255.0;
    return t;
}

}  // namespace

SignalSource load_image(const std::string& path) {
    std::string ext = extension(path);
    SignalSource out;
    out.kind = SignalKind::Image;
    if (ext == "png") out.tensor = read_png(path);
    else if (ext == "ppm" || ext == "pgm" || ext == "pnm") out.tensor = read_pnm(path);
    else throw InputError("unsupported image format: " + path);
    out.provenance.source = path;
    out.provenance.params = {{"scale", "value/maxval"},
                             {"height", std::to_string(out.tensor.shape[0])},
                             {"width", std::to_string(out.tensor.shape[1])},
                             {"channels", std::to_string(out.tensor.channels)},
                             {"precision", std::to_string(infer_precision(out.tensor.values).bits_per_scalar)}};
    return out;
}

void save_image(const std::string& path, const DataTensor& t) {
    if (t.shape.size() != 2 || (t.channels != 1 && t.channels != 3))
        throw std::invalid_argument("save_image needs a 2-axis tensor with 1 or 3 channels");
    std::vector<png_byte> buf(t.values.size());
    for (std::size_t i = 0; i < buf.size(); ++i)
        buf[i] = static_cast<png_byte>(std::lround(std::clamp(t.values[i], 0.0, 1.0) * 255.0));
    std::string ext = extension(path);
    if (ext == "png") {
        png_image img;
        std::memset(&img, 0, sizeof img);
        img.version = PNG_IMAGE_VERSION;
        img.width = static_cast<png_uint_32>(t.shape[1]);
        img.height = static_cast<png_uint_32>(t.shape[0]);
        img.format = t.channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
        if (!png_image_write_to_file(&img, path.c_str(), 0, buf.data(), 0, nullptr))
            throw InputError("cannot write " + path);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << (t.channels == 3 ? "P6\n" : "P5\n") << t.shape[1] << " " << t.shape[0] << "\n255\n";
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

std::size_t stft_frame_count(std::size_t samples, std::size_t window, std::size_t hop) {
    if (window == 0 || hop == 0 || samples < window) return 0;
    return (samples - window) / hop + 1;
}

namespace {
// FFTW planner calls are not thread-safe.
std::mutex fftw_planner;
}  // namespace

Spectrogram compute_spectrogram(const std::vector<double>& samples, const StftConfig& cfg) {
    std::size_t frames = stft_frame_count(samples.size(), cfg.window, cfg.hop);
    if (frames == 0) throw InputError("audio shorter than one analysis window");
    std::size_t bins = cfg.window / 2 + 1;
    Spectrogram s;
    s.config = cfg;
    s.frames.shape = {frames};
    s.frames.channels = bins;
    s.frames.values.resize(frames * bins);

    std::vector<double> win(cfg.window);
    for (std::size_t i = 0; i < cfg.window; ++i)
        win[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(cfg.window));

    double* in = fftw_alloc_real(cfg.window);
    fftw_complex* spec = fftw_alloc_complex(bins);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_planner);
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(cfg.window), in, spec, FFTW_ESTIMATE);
    }
    double floor_log = std::log10(cfg.log_floor);
    for (std::size_t f = 0; f < frames; ++f) {
        for (std::size_t i = 0; i < cfg.window; ++i) in[i] = samples[f * cfg.hop + i] * win[i];
        fftw_execute(plan);
        for (std::size_t b = 0; b < bins; ++b) {
            double mag = std::hypot(spec[b][0], spec[b][1]);
            s.frames.values[f * bins + b] = std::max(std::log10(std::max(mag, cfg.log_floor)), floor_log);
        }
    }
    {
        std::lock_guard<std::mutex> lock(fftw_planner);
        fftw_destroy_plan(plan);
    }
    fftw_free(in);
    fftw_free(spec);

    auto [mn, mx] = std::minmax_element(s.frames.values.begin(), s.frames.values.end());
    s.log_min = *mn;
    s.log_max = *mx;
    if (cfg.normalize) {
        double range = s.log_max - s.log_min;
        for (auto& v : s.frames.values) v = range > 0 ? (v - s.log_min) / range : 0.0;
    }
    return s;
}

namespace {

std::uint32_t le32(const std::string& b, std::size_t at) {
    return static_cast<std::uint32_t>(static_cast<unsigned char>(b[at])) |
           static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + 1])) << 8 |
           static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + 2])) << 16 |
           static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + 3])) << 24;
}

std::uint16_t le16(const std::string& b, std::size_t at) {
    return static_cast<std::uint16_t>(static_cast<unsigned char>(b[at]) | static_cast<unsigned char>(b[at + 1]) << 8);
}

}  // namespace

WavData read_wav(const std::string& path) {
    std::string b = read_file(path);
    if (b.size() < 12 || b.compare(0, 4, "RIFF") != 0 || b.compare(8, 4, "WAVE") != 0)
        throw InputError("not a RIFF/WAVE file: " + path);
    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t rate = 0;
    std::size_t data_at = 0, data_len = 0;
    for (std::size_t at = 12; at + 8 <= b.size();) {
        std::string id = b.substr(at, 4);
        std::size_t len = le32(b, at + 4);
        std::size_t body = at + 8;
        if (id == "fmt " && body + 16 <= b.size()) {
            format = le16(b, body);
            channels = le16(b, body + 2);
            rate = le32(b, body + 4);
            bits = le16(b, body + 14);
            if (format == 0xFFFE && len >= 26) format = le16(b, body + 24);
        } else if (id == "data") {
            data_at = body;
            data_len = std::min(len, b.size() - body);
        }
        at = body + len + (len & 1);
    }
    if (!channels || !data_at) throw InputError("missing fmt or data chunk in " + path);
    bool pcm = format == 1 && (bits == 8 || bits == 16 || bits == 24 || bits == 32);
    bool flt = format == 3 && (bits == 32 || bits == 64);
    if (!pcm && !flt) throw InputError("unsupported sample format in " + path);
    std::size_t bytes = bits / 8, frame = bytes * channels;
    std::size_t n = data_len / frame;
    WavData w;
    w.sample_rate = rate;
    w.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t c = 0; c < channels; ++c) {
            std::size_t at = data_at + i * frame + c * bytes;
            double v = 0.0;
            if (flt && bits == 32) {
                float f;
                std::memcpy(&f, b.data() + at, 4);
                v = f;
            } else if (flt) {
                std::memcpy(&v, b.data() + at, 8);
            } else if (bits == 8) {
                v = (static_cast<unsigned char>(b[at]) - 128.0) / 128.0;
            } else {
                std::int32_t s = 0;
                for (std::size_t k = 0; k < bytes; ++k)
                    s |= static_cast<std::int32_t>(static_cast<unsigned char>(b[at + k])) << (8 * k);
                int shift = 32 - static_cast<int>(bits);
                s = static_cast<std::int32_t>(static_cast<std::uint32_t>(s) << shift) >> shift;
                v = s / std::ldexp(1.0, static_cast<int>(bits) - 1);
            }
            acc += v;
        }
        w.samples[i] = acc / channels;
    }
    return w;
}

void write_wav(const std::string& path, const std::vector<double>& samples, std::uint32_t rate) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    auto put32 = [&](std::uint32_t v) { for (int k = 0; k < 4; ++k) out.put(static_cast<char>(v >> (8 * k))); };
    auto put16 = [&](std::uint16_t v) { out.put(static_cast<char>(v)); out.put(static_cast<char>(v >> 8)); };
    std::uint32_t data = static_cast<std::uint32_t>(samples.size() * 2);
    out.write("RIFF", 4);
    put32(36 + data);
    out.write("WAVEfmt ", 8);
    put32(16);
    put16(1);
    put16(1);
    put32(rate);
    put32(rate * 2);
    put16(2);
    put16(16);
    out.write("data", 4);
    put32(data);
    for (double s : samples) put16(static_cast<std::uint16_t>(static_cast<std::int16_t>(std::lround(std::clamp(s, -1.0, 1.0) * 32767.0))));
}

SignalSource load_audio(const std::string& path, const StftConfig& cfg) {
    WavData w = read_wav(path);
    Spectrogram s = compute_spectrogram(w.samples, cfg);
    SignalSource out;
    out.kind = SignalKind::Audio;
    out.tensor = std::move(s.frames);
    out.provenance.source = path;
    out.provenance.params = {{"sample_rate", std::to_string(w.sample_rate)},
                             {"window", std::to_string(cfg.window)},
                             {"hop", std::to_string(cfg.hop)},
                             {"window_fn", "hann"},
                             {"log_floor", std::to_string(cfg.log_floor)},
                             {"log10_min", std::to_string(s.log_min)},
                             {"log10_max", std::to_string(s.log_max)},
                             {"normalize", cfg.normalize ? "minmax" : "none"}};
    return out;
}

SignalSource load_bits(const std::string& path, std::size_t packed_bit_count) {
    std::string b = read_file(path);
    SignalSource out;
    out.kind = SignalKind::Bitgrid;
    out.provenance.source = path;
    bool ascii = std::all_of(b.begin(), b.end(), [](char c) {
        return c == '0' || c == '1' || std::isspace(static_cast<unsigned char>(c));
    });
    if (ascii) {
        for (char c : b)
            if (c == '0' || c == '1') out.bits.push_back(static_cast<std::uint8_t>(c - '0'));
        out.provenance.params["encoding"] = "ascii";
    } else {
        std::size_t total = packed_bit_count ? packed_bit_count : b.size() * 8;
        if (total > b.size() * 8) throw InputError("packed bit count exceeds file size");
        for (std::size_t i = 0; i < total; ++i)
            out.bits.push_back(static_cast<std::uint8_t>((static_cast<unsigned char>(b[i / 8]) >> (7 - i % 8)) & 1));
        out.provenance.params["encoding"] = "packed";
    }
    if (out.bits.empty()) throw InputError("no bits in " + path);
    out.provenance.params["bits"] = std::to_string(out.bits.size());
    return out;
}

std::string prime_modulo_string(const std::vector<std::uint64_t>& primes, const std::vector<std::uint64_t>& input) {
    if (primes.empty() || input.empty() || input[0] == 0) throw std::invalid_argument("prime-modulo needs primes and N > 0");
    const std::string chars = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ ";
    std::uint64_t n = input[0];
    std::vector<std::uint64_t> x(n, 0);
    for (std::size_t j = 1; j < input.size(); ++j) {
        std::uint64_t p = primes[(j - 1) % primes.size()];
        std::vector<std::uint64_t> add(n);
        std::uint64_t cur = 1;
        for (std::uint64_t i = 0; i < n; ++i) {
            add[i] = cur;
            cur = cur * p % n;
        }
        // to_add[-offset:] + to_add[:-offset]; offsets >= N leave the list as is
        std::uint64_t off = input[j];
        if (off > 0 && off < n) std::rotate(add.begin(), add.end() - static_cast<std::ptrdiff_t>(off), add.end());
        for (std::uint64_t i = 0; i < n; ++i) x[i] += add[i];
    }
    std::string out;
    for (auto v : x) out.push_back(chars[v % 53]);
    return out;
}

namespace {

SignalSource text_source(const std::string& s, const std::string& kind) {
    TextConfig cfg;
    cfg.budget = 0;
    auto out = text_from_utf8(s, cfg, "gen:" + kind);
    return out;
}

DataTensor binary_pattern(const GenParams& p, bool stripes) {
    DataTensor t;
    t.shape = {p.height, p.width};
    t.channels = 3;
    t.values.resize(p.height * p.width * 3);
    double ca = std::cos(p.angle), sa = std::sin(p.angle);
    for (std::size_t r = 0; r < p.height; ++r)
        for (std::size_t c = 0; c < p.width; ++c) {
            // signed distance along the pattern axis, measured from the centre
            double u = (static_cast<double>(c) + 0.5 - p.width / 2.0) * ca +
                       (static_cast<double>(r) + 0.5 - p.height / 2.0) * sa;
            double v;
            if (stripes) {
                auto band = static_cast<long long>(std::floor(u / static_cast<double>(p.stripe_width)));
                v = ((band % 2) + 2) % 2 == 0 ? 1.0 : 0.0;
            } else {
                v = u >= 0.0 ? 1.0 : 0.0;
            }
            for (std::size_t ch = 0; ch < 3; ++ch) t.values[(r * p.width + c) * 3 + ch] = v;
        }
    return t;
}

}  // namespace

SignalSource generate(const std::string& kind, const GenParams& p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::string letters = "abcdefghijklmnopqrstuvwxyz ";
    SignalSource out;
    if (kind == "rand-text") {
        if (p.alphabet < 1 || p.alphabet > letters.size()) throw std::invalid_argument("rand-text alphabet must be 1..27");
        out.kind = SignalKind::Text;
        out.text.alphabet_size = p.alphabet;
        std::uniform_int_distribution<std::size_t> pick(0, p.alphabet - 1);
        for (std::size_t i = 0; i < p.length; ++i) out.text.symbols.push_back(static_cast<Symbol>(pick(rng)));
        for (std::size_t i = 0; i < p.alphabet; ++i) out.alphabet.push_back(std::string(1, letters[i]));
    } else if (kind == "repeat-k") {
        if (p.k < 1) throw std::invalid_argument("repeat-k needs k >= 1");
        // Distinct letters while they last, so repeat-2 is "abab..." and never "aaaa...".
        std::string pool = letters.substr(0, 26), unit;
        std::shuffle(pool.begin(), pool.end(), rng);
        std::uniform_int_distribution<std::size_t> pick(0, 25);
        for (std::size_t i = 0; i < p.k; ++i) unit.push_back(i < 26 ? pool[i] : pool[pick(rng)]);
        std::string s;
        while (s.size() < p.length) s += unit;
        s.resize(p.length);
        out = text_source(s, kind);
        out.provenance.params["unit"] = unit;
    } else if (kind == "simp-en") {
        static const char* words[] = {"the", "dog", "runs", "quickly", "home"};
        std::uniform_int_distribution<int> pick(0, 4);
        std::string s;
        while (s.size() < p.length) {
            if (!s.empty()) s.push_back(' ');
            s += words[pick(rng)];
        }
        s.resize(p.length);
        out = text_source(s, kind);
        out.provenance.params["words"] = "the dog runs quickly home";
    } else if (kind == "prime-modulo") {
        out = text_source(prime_modulo_string(p.primes, p.input), kind);
    } else if (kind == "white-noise-image") {
        out.kind = SignalKind::Image;
        out.tensor.shape = {p.height, p.width};
        out.tensor.channels = 3;
        std::uniform_int_distribution<int> byte(0, 255);
        for (std::size_t i = 0; i < p.height * p.width * 3; ++i) out.tensor.values.push_back(byte(rng) / 255.0);
    } else if (kind == "stripes" || kind == "halves") {
        if (kind == "stripes" && p.stripe_width < 1) throw std::invalid_argument("stripe width must be >= 1");
        out.kind = SignalKind::Image;
        out.tensor = binary_pattern(p, kind == "stripes");
    } else {
        throw std::invalid_argument("unknown generator kind: " + kind);
    }
    out.provenance.source = "gen:" + kind;
    out.provenance.params["seed"] = std::to_string(seed);
    if (out.kind == SignalKind::Text) out.provenance.params["length"] = std::to_string(p.length);
    return out;
}

}  // namespace lcc
