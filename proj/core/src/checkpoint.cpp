#include "psl/checkpoint.hpp"

#include <vector>

#include "binary_io.hpp"

namespace psl {

namespace {
constexpr char kMagic[4] = {'S', 'Q', '2', 'S'};
constexpr std::uint32_t kVersion = 1;

bool shapes_compatible(const ModelConfig& a, const ModelConfig& b) {
  return a.d_model == b.d_model && a.n_heads == b.n_heads &&
         a.n_layers_enc == b.n_layers_enc && a.n_layers_dec == b.n_layers_dec &&
         a.d_ff == b.d_ff && a.unit_vocab == b.unit_vocab &&
         a.max_src_len == b.max_src_len && a.max_tgt_len == b.max_tgt_len;
}
}  // namespace

void save_checkpoint(const Seq2SeqModel& m, const std::string& path) {
  auto os = detail::open_output(path);
  detail::write_bytes(os, kMagic, 4);
  detail::write_pod<std::uint32_t>(os, kVersion);
  const auto& c = m.config;
  for (std::size_t v : {c.d_model, c.n_heads, c.n_layers_enc, c.n_layers_dec,
                        c.d_ff, c.unit_vocab, c.max_src_len, c.max_tgt_len})
    detail::write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(v));
  detail::write_pod<std::uint64_t>(os, c.seed);
  detail::write_pod<std::uint32_t>(os,
                                   static_cast<std::uint32_t>(m.params.size()));
  for (const auto& p : m.params) {
    detail::write_pod<std::uint16_t>(
        os, static_cast<std::uint16_t>(p.name.size()));
    detail::write_bytes(os, p.name.data(), p.name.size());
    detail::write_pod<std::uint8_t>(os,
                                    static_cast<std::uint8_t>(p.value.rank()));
    for (std::size_t d : p.value.shape)
      detail::write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(d));
    detail::write_bytes(os, p.value.ptr(),
                        p.value.numel() * sizeof(float));
  }
}

Seq2SeqModel load_checkpoint(const std::string& path,
                             const std::optional<ModelConfig>& expected) {
  auto is = detail::open_input(path);
  detail::expect_magic(is, kMagic, path);
  auto version = detail::read_pod<std::uint32_t>(is, path + ": version");
  if (version != kVersion)
    raise(ErrorCode::UnknownVersion,
          path + ": checkpoint version " + std::to_string(version));

  ModelConfig cfg;
  cfg.d_model = detail::read_pod<std::uint32_t>(is, "d_model");
  cfg.n_heads = detail::read_pod<std::uint32_t>(is, "n_heads");
  cfg.n_layers_enc = detail::read_pod<std::uint32_t>(is, "n_layers_enc");
  cfg.n_layers_dec = detail::read_pod<std::uint32_t>(is, "n_layers_dec");
  cfg.d_ff = detail::read_pod<std::uint32_t>(is, "d_ff");
  cfg.unit_vocab = detail::read_pod<std::uint32_t>(is, "unit_vocab");
  cfg.max_src_len = detail::read_pod<std::uint32_t>(is, "max_src_len");
  cfg.max_tgt_len = detail::read_pod<std::uint32_t>(is, "max_tgt_len");
  cfg.seed = detail::read_pod<std::uint64_t>(is, "seed");
  cfg.validate();

  if (expected && !shapes_compatible(cfg, *expected))
    raise(ErrorCode::ShapeMismatchOnLoad,
          path + ": checkpoint config does not match the expected config");

  auto m = make_model_skeleton<float>(cfg);
  auto n_tensors = detail::read_pod<std::uint32_t>(is, "tensor count");
  if (n_tensors != m.params.size())
    raise(ErrorCode::ShapeMismatchOnLoad,
          path + ": checkpoint has " + std::to_string(n_tensors) +
              " tensors, config implies " + std::to_string(m.params.size()));

  std::vector<bool> seen(m.params.size(), false);
  for (std::uint32_t t = 0; t < n_tensors; ++t) {
    auto name_len = detail::read_pod<std::uint16_t>(is, "tensor name length");
    std::string name(name_len, '\0');
    detail::read_bytes(is, name.data(), name_len, "tensor name");
    auto it = m.index.find(name);
    if (it == m.index.end())
      raise(ErrorCode::ShapeMismatchOnLoad,
            path + ": unexpected tensor \"" + name + "\"");
    auto& param = m.params[it->second];
    if (seen[it->second])
      raise(ErrorCode::ShapeMismatchOnLoad,
            path + ": duplicate tensor \"" + name + "\"");
    seen[it->second] = true;

    auto rank = detail::read_pod<std::uint8_t>(is, "tensor rank");
    if (rank != param.value.rank())
      raise(ErrorCode::ShapeMismatchOnLoad,
            path + ": tensor \"" + name + "\" rank mismatch");
    for (std::size_t d = 0; d < rank; ++d) {
      auto dim = detail::read_pod<std::uint32_t>(is, "tensor dim");
      if (dim != param.value.dim(d))
        raise(ErrorCode::ShapeMismatchOnLoad,
              path + ": tensor \"" + name + "\" dim " + std::to_string(d) +
                  " mismatch");
    }
    detail::read_bytes(is, param.value.ptr(),
                       param.value.numel() * sizeof(float),
                       "tensor \"" + name + "\" data");
    nn::ensure_finite(param.value, "checkpoint load");
  }
  detail::expect_eof(is, path);
  return m;
}

}  // namespace psl
