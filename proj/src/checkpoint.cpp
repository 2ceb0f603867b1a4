#include "motivescan/checkpoint.hpp"

#include <cmath>
#include <map>

#include "motivescan/error.hpp"
#include "motivescan/io_util.hpp"

namespace motivescan {

namespace {

constexpr const char* kHeader = "MOTIVE-MODEL v1";

}  // namespace

std::string serialize_model(const ModelParams& params) {
  params.check_finite();
  std::string out;
  out += kHeader;
  out += '\n';
  out += "input_dim=" + std::to_string(params.hp.input_dim) + "\n";
  out += "hidden=" + std::to_string(params.hp.hidden) + "\n";
  out += "attn=" + std::to_string(params.hp.attn) + "\n";
  out += "dropout=" + format_double(params.hp.dropout) + "\n";
  out += "layers=" + std::to_string(kNumLayers) + "\n";
  out += "classes=" + std::to_string(kNumClasses) + "\n";
  out += '\n';
  for (const TensorRef& t : params.tensors()) {
    out += t.name;
    out += '\n';
    out += std::to_string(t.rows) + " " + std::to_string(t.cols) + "\n";
    // Tensors are stored column-major; emit row-major lines.
    for (Eigen::Index r = 0; r < t.rows; ++r) {
      for (Eigen::Index c = 0; c < t.cols; ++c) {
        if (c > 0) out += ' ';
        out += format_double(t.data[c * t.rows + r]);
      }
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

ModelParams deserialize_model(const std::string& text) {
  std::vector<std::string> lines = split(text, '\n');
  // split() leaves a final empty field after a trailing newline; drop it so
  // "ends exactly after the last tensor" is checkable.
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  for (std::string& line : lines) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
  }

  std::size_t pos = 0;
  auto next_line = [&](const char* what) -> const std::string& {
    if (pos >= lines.size()) {
      throw MotiveError(std::string("truncated checkpoint: expected ") +
                        what);
    }
    return lines[pos++];
  };

  if (next_line("header") != kHeader) {
    throw MotiveError(std::string("checkpoint header must be '") + kHeader +
                      "'");
  }

  std::map<std::string, std::string> meta;
  while (true) {
    const std::string& line = next_line("metadata");
    if (line.empty()) break;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw MotiveError("checkpoint metadata line lacks '=': " + line);
    }
    meta[line.substr(0, eq)] = line.substr(eq + 1);
  }
  auto meta_value = [&](const char* key) -> const std::string& {
    auto it = meta.find(key);
    if (it == meta.end()) {
      throw MotiveError(std::string("checkpoint metadata missing key '") +
                        key + "'");
    }
    return it->second;
  };
  ModelHyperparams hp;
  hp.input_dim = parse_int(meta_value("input_dim"), "checkpoint input_dim");
  hp.hidden = parse_int(meta_value("hidden"), "checkpoint hidden");
  hp.attn = parse_int(meta_value("attn"), "checkpoint attn");
  hp.dropout = parse_double(meta_value("dropout"), "checkpoint dropout");
  if (parse_int(meta_value("layers"), "checkpoint layers") != kNumLayers) {
    throw MotiveError("checkpoint layer count does not match this build");
  }
  if (parse_int(meta_value("classes"), "checkpoint classes") != kNumClasses) {
    throw MotiveError("checkpoint class count does not match this build");
  }

  ModelParams params = ModelParams::zeros(hp);
  for (TensorRef& t : params.tensors()) {
    const std::string& name = next_line("tensor name");
    if (name != t.name) {
      throw MotiveError("checkpoint tensor '" + name + "' where '" + t.name +
                        "' was expected");
    }
    std::vector<std::string> shape = split_whitespace(next_line("shape"));
    if (shape.size() != 2 ||
        parse_int(shape[0], "checkpoint shape") != t.rows ||
        parse_int(shape[1], "checkpoint shape") != t.cols) {
      throw MotiveError("checkpoint tensor '" + t.name +
                        "' has the wrong shape");
    }
    for (Eigen::Index r = 0; r < t.rows; ++r) {
      std::vector<std::string> row = split_whitespace(next_line("values"));
      if (static_cast<Eigen::Index>(row.size()) != t.cols) {
        throw MotiveError("checkpoint tensor '" + t.name + "' row " +
                          std::to_string(r) + " has " +
                          std::to_string(row.size()) + " values, expected " +
                          std::to_string(t.cols));
      }
      for (Eigen::Index c = 0; c < t.cols; ++c) {
        const double v = parse_double(row[c], "checkpoint value");
        if (!std::isfinite(v)) {
          throw MotiveError("non-finite value in checkpoint tensor '" +
                            t.name + "'");
        }
        t.data[c * t.rows + r] = v;
      }
    }
    if (!next_line("blank separator").empty()) {
      throw MotiveError("checkpoint tensor '" + t.name +
                        "' is not followed by a blank line");
    }
  }
  if (pos != lines.size()) {
    throw MotiveError("unexpected content after the last checkpoint tensor");
  }
  return params;
}

void save_model(const ModelParams& params, const std::string& path) {
  write_file_atomic(path, serialize_model(params));
}

ModelParams load_model(const std::string& path) {
  return deserialize_model(read_file(path));
}

std::string model_fingerprint(const ModelParams& params) {
  return fingerprint_hex(fnv1a64(serialize_model(params)));
}

}  // namespace motivescan
