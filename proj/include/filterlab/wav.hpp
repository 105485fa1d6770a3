#ifndef FILTERLAB_WAV_HPP
#define FILTERLAB_WAV_HPP

#include <cstdint>
#include <filesystem>
#include <vector>

namespace filterlab {

struct WavData {
    std::uint32_t sample_rate = 0;
    std::vector<double> samples;  // normalized to [-1, 1)
};

/// Reads a 16-bit signed PCM mono WAV file. Throws IoError on anything else.
WavData read_wav_pcm16(const std::filesystem::path& path);

/// Writes samples (clamped to [-1, 1]) as 16-bit signed PCM mono.
void write_wav_pcm16(const std::filesystem::path& path, const std::vector<double>& samples,
                     std::uint32_t sample_rate = 16000);

/// One coefficient per line; blank lines and '#' comments are skipped.
std::vector<double> read_coefficients(const std::filesystem::path& path);

}  // namespace filterlab

#endif  // FILTERLAB_WAV_HPP
