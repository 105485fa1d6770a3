#include "filterlab/wav.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "filterlab/error.hpp"

namespace filterlab {

namespace {

std::uint32_t le32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t le16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put32(std::ostream& os, std::uint32_t v) {
    const std::array<char, 4> b{static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                                static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
    os.write(b.data(), 4);
}

void put16(std::ostream& os, std::uint16_t v) {
    const std::array<char, 2> b{static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff)};
    os.write(b.data(), 2);
}

}  // namespace

WavData read_wav_pcm16(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open WAV file " + path.string());
    }
    const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto bad = [&](const std::string& why) { return IoError(path.string() + ": " + why); };

    if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 || std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
        throw bad("not a RIFF/WAVE file");
    }

    bool have_fmt = false;
    WavData out;
    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const unsigned char* chunk = bytes.data() + pos;
        const std::uint32_t size = le32(chunk + 4);
        const std::size_t body = pos + 8;
        if (body + size > bytes.size()) {
            throw bad("truncated chunk");
        }
        if (std::memcmp(chunk, "fmt ", 4) == 0) {
            if (size < 16) {
                throw bad("fmt chunk too short");
            }
            const std::uint16_t format = le16(bytes.data() + body);
            const std::uint16_t channels = le16(bytes.data() + body + 2);
            out.sample_rate = le32(bytes.data() + body + 4);
            const std::uint16_t bits = le16(bytes.data() + body + 14);
            if (format != 1) {
                throw bad("only PCM (format 1) is supported");
            }
            if (channels != 1) {
                throw bad("expected mono, got " + std::to_string(channels) + " channels");
            }
            if (bits != 16) {
                throw bad("expected 16-bit samples, got " + std::to_string(bits));
            }
            have_fmt = true;
        } else if (std::memcmp(chunk, "data", 4) == 0) {
            if (!have_fmt) {
                throw bad("data chunk before fmt chunk");
            }
            const std::size_t count = size / 2;
            out.samples.resize(count);
            for (std::size_t i = 0; i < count; ++i) {
                const auto raw = static_cast<std::int16_t>(le16(bytes.data() + body + 2 * i));
                out.samples[i] = static_cast<double>(raw) / 32768.0;
            }
            return out;
        }
        pos = body + size + (size & 1u);
    }
    throw bad("no data chunk");
}

void write_wav_pcm16(const std::filesystem::path& path, const std::vector<double>& samples,
                     std::uint32_t sample_rate) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw IoError("cannot write WAV file " + path.string());
    }
    const auto data_bytes = static_cast<std::uint32_t>(samples.size() * 2);
    os.write("RIFF", 4);
    put32(os, 36 + data_bytes);
    os.write("WAVE", 4);
    os.write("fmt ", 4);
    put32(os, 16);
    put16(os, 1);
    put16(os, 1);
    put32(os, sample_rate);
    put32(os, sample_rate * 2);
    put16(os, 2);
    put16(os, 16);
    os.write("data", 4);
    put32(os, data_bytes);
    for (const double s : samples) {
        const double scaled = std::round(std::clamp(s, -1.0, 1.0) * 32767.0);
        put16(os, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
    }
}

std::vector<double> read_coefficients(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open coefficient file " + path.string());
    }
    std::vector<double> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream ls(line);
        double v = 0.0;
        if (!(ls >> v)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) {
                continue;
            }
            throw IoError(path.string() + ":" + std::to_string(line_no) + ": not a number");
        }
        out.push_back(v);
    }
    if (out.empty()) {
        throw IoError(path.string() + ": no coefficients");
    }
    return out;
}

}  // namespace filterlab
