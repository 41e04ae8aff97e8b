#include "psl/wav_io.hpp"

#include <cstdint>
#include <cstring>

#include "binary_io.hpp"

namespace psl {

namespace {

struct FmtChunk {
  std::uint16_t audio_format = 0;
  std::uint16_t num_channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint32_t byte_rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits_per_sample = 0;
};

}  // namespace

Waveform read_wav(const std::string& path) {
  auto is = detail::open_input(path);

  char riff[4], wave[4];
  detail::read_bytes(is, riff, 4, path + ": RIFF id");
  auto riff_size = detail::read_pod<std::uint32_t>(is, path + ": RIFF size");
  (void)riff_size;
  detail::read_bytes(is, wave, 4, path + ": WAVE id");
  if (std::memcmp(riff, "RIFF", 4) != 0 || std::memcmp(wave, "WAVE", 4) != 0)
    raise(ErrorCode::UnsupportedFormat, path + ": not a RIFF/WAVE file");

  FmtChunk fmt;
  bool have_fmt = false;
  std::vector<std::int16_t> pcm;
  bool have_data = false;

  // Chunk scan: read fmt and data, skip everything else.
  for (;;) {
    char chunk_id[4];
    is.read(chunk_id, 4);
    if (is.gcount() == 0) break;  // clean end of file
    if (is.gcount() != 4)
      raise(ErrorCode::TruncatedFile, path + ": partial chunk header");
    auto chunk_size = detail::read_pod<std::uint32_t>(is, path + ": chunk size");

    if (std::memcmp(chunk_id, "fmt ", 4) == 0) {
      if (chunk_size < 16)
        raise(ErrorCode::TruncatedFile, path + ": fmt chunk too small");
      fmt.audio_format = detail::read_pod<std::uint16_t>(is, "fmt");
      fmt.num_channels = detail::read_pod<std::uint16_t>(is, "fmt");
      fmt.sample_rate = detail::read_pod<std::uint32_t>(is, "fmt");
      fmt.byte_rate = detail::read_pod<std::uint32_t>(is, "fmt");
      fmt.block_align = detail::read_pod<std::uint16_t>(is, "fmt");
      fmt.bits_per_sample = detail::read_pod<std::uint16_t>(is, "fmt");
      is.seekg(chunk_size - 16, std::ios::cur);
      have_fmt = true;
    } else if (std::memcmp(chunk_id, "data", 4) == 0) {
      if (!have_fmt)
        raise(ErrorCode::UnsupportedFormat, path + ": data chunk before fmt");
      if (fmt.audio_format != 1)  // PCM
        raise(ErrorCode::UnsupportedFormat,
              path + ": only PCM supported (format tag " +
                  std::to_string(fmt.audio_format) + ")");
      if (fmt.num_channels != 1)
        raise(ErrorCode::UnsupportedFormat,
              path + ": only mono supported (" +
                  std::to_string(fmt.num_channels) + " channels)");
      if (fmt.bits_per_sample != 16)
        raise(ErrorCode::UnsupportedFormat,
              path + ": only 16-bit supported (" +
                  std::to_string(fmt.bits_per_sample) + " bits)");
      if (chunk_size % 2 != 0)
        raise(ErrorCode::TruncatedFile, path + ": odd data chunk size");
      pcm.resize(chunk_size / 2);
      detail::read_bytes(is, pcm.data(), chunk_size, path + ": sample data");
      have_data = true;
    } else {
      // chunks are word-aligned; skip payload plus pad byte if odd
      is.seekg(chunk_size + (chunk_size & 1), std::ios::cur);
      if (!is) raise(ErrorCode::TruncatedFile, path + ": truncated chunk");
    }
  }

  if (!have_data || pcm.empty())
    raise(ErrorCode::TruncatedFile, path + ": no sample data");

  Waveform w;
  w.sample_rate = fmt.sample_rate;
  w.samples.resize(pcm.size());
  for (std::size_t i = 0; i < pcm.size(); ++i)
    w.samples[i] = static_cast<double>(pcm[i]) / 32768.0;
  return w;
}

void write_wav_pcm16_mono(const std::string& path, std::uint32_t sample_rate,
                          const std::vector<std::int16_t>& samples) {
  auto os = detail::open_output(path);
  std::uint32_t data_bytes = static_cast<std::uint32_t>(samples.size() * 2);
  detail::write_bytes(os, "RIFF", 4);
  detail::write_pod<std::uint32_t>(os, 36 + data_bytes);
  detail::write_bytes(os, "WAVE", 4);
  detail::write_bytes(os, "fmt ", 4);
  detail::write_pod<std::uint32_t>(os, 16);
  detail::write_pod<std::uint16_t>(os, 1);  // PCM
  detail::write_pod<std::uint16_t>(os, 1);  // mono
  detail::write_pod<std::uint32_t>(os, sample_rate);
  detail::write_pod<std::uint32_t>(os, sample_rate * 2);
  detail::write_pod<std::uint16_t>(os, 2);
  detail::write_pod<std::uint16_t>(os, 16);
  detail::write_bytes(os, "data", 4);
  detail::write_pod<std::uint32_t>(os, data_bytes);
  detail::write_bytes(os, samples.data(), data_bytes);
}

}  // namespace psl
