#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lcc/coding.hpp"
#include "lcc/continuous.hpp"

namespace lcc {

enum class SignalKind { Text, Image, Audio, Bitgrid };

const char* kind_name(SignalKind k);

struct Provenance {
    std::string source;
    std::map<std::string, std::string> params;
};

struct SignalSource {
    SignalKind kind = SignalKind::Text;
    SymbolString text;                 // Text
    std::vector<std::string> alphabet; // Text: UTF-8 of each symbol id
    DataTensor tensor;                 // Image, Audio
    std::vector<std::uint8_t> bits;    // Bitgrid
    Provenance provenance;
};

class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TextConfig {
    std::size_t budget = 7500;  // characters after normalisation; 0 keeps all
    bool lowercase = false;
};

SignalSource text_from_utf8(const std::string& utf8, const TextConfig& cfg = {}, const std::string& source = "");
SignalSource load_text(const std::string& path, const TextConfig& cfg = {});

SignalSource load_image(const std::string& path);
void save_image(const std::string& path, const DataTensor& t);

struct StftConfig {
    std::size_t window = 1024;
    std::size_t hop = 512;
    double log_floor = 1e-10;
    // Min-max scale log magnitudes to [0, 1] for clustering.
    bool normalize = true;
};

struct Spectrogram {
    DataTensor frames;  // one axis (time), channels = window / 2 + 1
    StftConfig config;
    double log_min = 0.0, log_max = 0.0;  // range used for normalisation
};

std::size_t stft_frame_count(std::size_t samples, std::size_t window, std::size_t hop);
Spectrogram compute_spectrogram(const std::vector<double>& samples, const StftConfig& cfg = {});

struct WavData {
    std::vector<double> samples;  // mono mix in [-1, 1]
    std::uint32_t sample_rate = 0;
};

WavData read_wav(const std::string& path);
void write_wav(const std::string& path, const std::vector<double>& samples, std::uint32_t rate);
SignalSource load_audio(const std::string& path, const StftConfig& cfg = {});

// ASCII '0'/'1' (whitespace ignored) or packed bytes, MSB first.
SignalSource load_bits(const std::string& path, std::size_t packed_bit_count = 0);

struct GenParams {
    std::size_t length = 7500;     // text kinds
    std::size_t alphabet = 27;     // rand-text: letters then space
    std::size_t k = 2;             // repeat-k unit length
    std::size_t height = 32, width = 32;
    std::size_t stripe_width = 4;  // stripes
    double angle = 0.0;            // radians, stripes and halves
    std::vector<std::uint64_t> primes = {2, 3, 19, 5, 11};
    std::vector<std::uint64_t> input = {250, 120, 24, 82, 10, 15, 202};
};

// kind: rand-text, repeat-k, simp-en, white-noise-image, stripes, halves, prime-modulo
SignalSource generate(const std::string& kind, const GenParams& params, std::uint64_t seed);

std::string prime_modulo_string(const std::vector<std::uint64_t>& primes, const std::vector<std::uint64_t>& input);

}  // namespace lcc
