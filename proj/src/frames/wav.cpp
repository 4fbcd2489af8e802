#include "hlds/diag.hpp"
#include "hlds/error.hpp"
#include "hlds/frames.hpp"

#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

namespace hlds::frames {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t le16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t le32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put16(std::string& out, std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

void put32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
}

} // namespace

std::int16_t double_to_pcm16(double v) {
    const double scaled = std::round(v * 32768.0);
    if (scaled >= 32767.0) {
        return 32767;
    }
    if (scaled <= -32768.0) {
        return -32768;
    }
    return static_cast<std::int16_t>(scaled);
}

AudioClip read_wav(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open WAV file " + path.string());
    }
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto* data = reinterpret_cast<const unsigned char*>(bytes.data());
    const std::size_t size = bytes.size();
    const std::string where = path.string() + ": ";

    if (size < 12 || std::memcmp(data, "RIFF", 4) != 0 || std::memcmp(data + 8, "WAVE", 4) != 0) {
        throw InputError(where + "not a RIFF/WAVE file (bad header magic)");
    }

    bool have_fmt = false;
    std::uint16_t channels = 0;
    std::uint32_t rate = 0;
    const unsigned char* pcm = nullptr;
    std::size_t pcm_bytes = 0;

    std::size_t pos = 12;
    while (pos + 8 <= size) {
        const unsigned char* chunk = data + pos;
        const std::uint32_t len = le32(chunk + 4);
        const std::size_t body = pos + 8;
        if (body + len > size && std::memcmp(chunk, "data", 4) != 0) {
            throw InputError(where + "chunk '" + std::string(reinterpret_cast<const char*>(chunk), 4) +
                             "' runs past end of file");
        }
        if (std::memcmp(chunk, "fmt ", 4) == 0) {
            if (len < 16) {
                throw InputError(where + "fmt chunk too short (" + std::to_string(len) + " bytes)");
            }
            const unsigned char* f = data + body;
            std::uint16_t format = le16(f);
            channels = le16(f + 2);
            rate = le32(f + 4);
            const std::uint16_t bits = le16(f + 14);
            if (format == kFormatExtensible && len >= 26) {
                format = le16(f + 24); // first two bytes of the sub-format GUID
            }
            if (format != kFormatPcm) {
                throw InputError(where + "unsupported audio format " + std::to_string(format) +
                                 " (only PCM is supported)");
            }
            if (bits != 16) {
                throw InputError(where + "unsupported bits per sample " + std::to_string(bits) +
                                 " (only 16-bit PCM is supported)");
            }
            if (channels != 1 && channels != 2) {
                throw InputError(where + "unsupported channel count " + std::to_string(channels));
            }
            if (rate == 0) {
                throw InputError(where + "sample rate is zero");
            }
            have_fmt = true;
        } else if (std::memcmp(chunk, "data", 4) == 0) {
            pcm = data + body;
            // Tolerate a truncated final data chunk (common with streamed writers).
            pcm_bytes = std::min<std::size_t>(len, size - body);
        }
        pos = body + len + (len & 1U);
    }
    if (!have_fmt) {
        throw InputError(where + "missing fmt chunk");
    }
    if (pcm == nullptr) {
        throw InputError(where + "missing data chunk");
    }

    const std::size_t frame_bytes = 2U * channels;
    const std::size_t n = pcm_bytes / frame_bytes;
    AudioClip clip;
    clip.sample_rate = static_cast<int>(rate);
    clip.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const unsigned char* s = pcm + i * frame_bytes;
        if (channels == 1) {
            clip.samples[i] = pcm16_to_double(static_cast<std::int16_t>(le16(s)));
        } else {
            clip.samples[i] = 0.5 * (pcm16_to_double(static_cast<std::int16_t>(le16(s))) +
                                     pcm16_to_double(static_cast<std::int16_t>(le16(s + 2))));
        }
    }
    if (channels == 2) {
        diag::warn(path.string() + ": stereo input averaged to mono");
    }
    return clip;
}

void write_wav(const std::filesystem::path& path, const AudioClip& clip) {
    if (clip.sample_rate <= 0) {
        throw InputError("cannot write WAV with sample rate " + std::to_string(clip.sample_rate));
    }
    const auto n = static_cast<std::uint32_t>(clip.samples.size());
    std::string out;
    out.reserve(44 + 2 * static_cast<std::size_t>(n));
    out += "RIFF";
    put32(out, 36 + 2 * n);
    out += "WAVEfmt ";
    put32(out, 16);
    put16(out, kFormatPcm);
    put16(out, 1);
    put32(out, static_cast<std::uint32_t>(clip.sample_rate));
    put32(out, static_cast<std::uint32_t>(clip.sample_rate) * 2);
    put16(out, 2);
    put16(out, 16);
    out += "data";
    put32(out, 2 * n);
    for (double s : clip.samples) {
        put16(out, static_cast<std::uint16_t>(double_to_pcm16(s)));
    }
    std::ofstream f(path, std::ios::binary);
    if (!f || !f.write(out.data(), static_cast<std::streamsize>(out.size()))) {
        throw InputError("cannot write WAV file " + path.string());
    }
}

} // namespace hlds::frames
