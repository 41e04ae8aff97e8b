#include "psl/config.hpp"

#include <fstream>
#include <functional>
#include <set>

#include <json.hpp>

#include "psl/error.hpp"

namespace psl {

using nlohmann::json;

namespace {

void require_object(const json& j, const std::string& where) {
  if (!j.is_object())
    raise(ErrorCode::ConfigError, where + " must be a JSON object");
}

// Walks an object with a fixed key set; anything else is a config error.
class StrictObject {
 public:
  StrictObject(const json& obj, std::string where)
      : obj_(obj), where_(std::move(where)) {
    require_object(obj, where_);
  }

  template <typename T>
  void get(const char* key, T& out) {
    known_.insert(key);
    if (!obj_.contains(key)) return;
    try {
      out = obj_[key].get<T>();
    } catch (const json::exception&) {
      raise(ErrorCode::ConfigError,
            where_ + "." + key + " has the wrong type");
    }
  }

  bool has(const char* key) {
    known_.insert(key);
    return obj_.contains(key);
  }

  const json& raw(const char* key) {
    known_.insert(key);
    return obj_[key];
  }

  void finish() {
    for (const auto& [key, value] : obj_.items())
      if (!known_.count(key))
        raise(ErrorCode::ConfigError,
              where_ + ": unknown key \"" + key + "\"");
  }

 private:
  const json& obj_;
  std::string where_;
  std::set<std::string> known_;
};

}  // namespace

PipelineConfig parse_pipeline_config(const std::string& json_text) {
  json doc = json::parse(json_text, nullptr, false);
  if (doc.is_discarded())
    raise(ErrorCode::ConfigError, "config is not valid JSON");

  PipelineConfig cfg;
  StrictObject root(doc, "config");

  if (root.has("kmeans")) {
    StrictObject o(root.raw("kmeans"), "kmeans");
    o.get("k", cfg.kmeans.k);
    o.get("max_iters", cfg.kmeans.max_iters);
    o.get("tol", cfg.kmeans.tol);
    o.get("seed", cfg.kmeans.seed);
    o.get("restarts", cfg.kmeans.restarts);
    o.finish();
    if (cfg.kmeans.k < 1 || cfg.kmeans.max_iters < 1 || cfg.kmeans.tol < 0 ||
        cfg.kmeans.restarts < 1)
      raise(ErrorCode::ConfigError, "kmeans: invalid field value");
  }

  if (root.has("model")) {
    StrictObject o(root.raw("model"), "model");
    bool has_dff = o.has("d_ff");
    o.get("d_model", cfg.model.d_model);
    o.get("n_heads", cfg.model.n_heads);
    o.get("n_layers_enc", cfg.model.n_layers_enc);
    o.get("n_layers_dec", cfg.model.n_layers_dec);
    o.get("d_ff", cfg.model.d_ff);
    o.get("unit_vocab", cfg.model.unit_vocab);
    o.get("max_src_len", cfg.model.max_src_len);
    o.get("max_tgt_len", cfg.model.max_tgt_len);
    o.get("seed", cfg.model.seed);
    o.finish();
    if (!has_dff) cfg.model.d_ff = 4 * cfg.model.d_model;
    try {
      cfg.model.validate();
    } catch (const Error& e) {
      raise(ErrorCode::ConfigError, std::string("model: ") + e.what());
    }
  }

  if (root.has("train")) {
    StrictObject o(root.raw("train"), "train");
    o.get("lr", cfg.train.lr);
    o.get("batch_size", cfg.train.batch_size);
    o.get("max_steps", cfg.train.max_steps);
    o.get("shuffle_seed", cfg.train.shuffle_seed);
    o.get("log_every", cfg.train.log_every);
    o.get("clip_norm", cfg.train.clip_norm);
    o.finish();
    if (cfg.train.lr <= 0 || cfg.train.batch_size < 1)
      raise(ErrorCode::ConfigError, "train: invalid field value");
  }

  if (root.has("paths")) {
    StrictObject o(root.raw("paths"), "paths");
    o.get("workdir", cfg.workdir);
    if (o.has("manifests")) {
      const json& m = o.raw("manifests");
      require_object(m, "paths.manifests");
      for (const auto& [name, value] : m.items()) {
        if (!value.is_string())
          raise(ErrorCode::ConfigError,
                "paths.manifests." + name + " must be a string");
        cfg.manifests[name] = value.get<std::string>();
      }
    }
    o.finish();
  }

  root.finish();
  return cfg;
}

PipelineConfig load_pipeline_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) raise(ErrorCode::IoError, "cannot open " + path + " for reading");
  std::string text((std::istreambuf_iterator<char>(is)),
                   std::istreambuf_iterator<char>());
  try {
    return parse_pipeline_config(text);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError)
      throw Error(ErrorCode::ConfigError, path + ": " + e.what());
    throw;
  }
}

void apply_seed_override(PipelineConfig& cfg, std::uint64_t seed) {
  cfg.kmeans.seed = seed;
  cfg.model.seed = seed;
  cfg.train.shuffle_seed = seed;
}

}  // namespace psl
