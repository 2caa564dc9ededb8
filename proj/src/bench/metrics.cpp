#include "acgd/bench/metrics.hpp"

#include <sstream>

#include "acgd/common.hpp"

namespace acgd {

const char* MetricsWriter::header() {
  return "iter,env_steps,delta_d,delta_r,sr_d,sr_r,loss_policy,loss_value,entropy,"
         "mean_episode_length,eval_success_rate,eval_mean_success_length";
}

MetricsWriter::MetricsWriter(const std::filesystem::path& path, uint64_t config_hash,
                             uint64_t seed)
    : path_(path) {
  const bool existing = std::filesystem::exists(path) && std::filesystem::file_size(path) > 0;
  out_.open(path, existing ? std::ios::app : std::ios::trunc);
  if (!out_) throw IoError("cannot open metrics file '" + path.string() + "'");
  if (!existing) {
    out_ << "# config_hash=" << format_u64_hex(config_hash) << " seed=" << seed << "\n"
         << header() << "\n";
  }
}

void MetricsWriter::append(const IterationMetrics& m) {
  out_ << m.iter << ',' << m.env_steps << ',' << format_double(m.delta_d) << ','
       << format_double(m.delta_r) << ',' << format_double(m.sr_d) << ','
       << format_double(m.sr_r) << ',' << format_double(m.loss_policy) << ','
       << format_double(m.loss_value) << ',' << format_double(m.entropy) << ','
       << format_double(m.mean_episode_length) << ',';
  if (m.eval) {
    out_ << format_double(m.eval->success_rate) << ','
         << format_double(m.eval->mean_success_length);
  } else {
    out_ << ',';
  }
  out_ << '\n';
  out_.flush();
}

void MetricsWriter::flush() { out_.flush(); }

namespace {
std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}
}  // namespace

MetricsFile read_metrics(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open metrics file '" + path.string() + "'");
  MetricsFile file;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# config_hash=", 0) != 0) {
    throw ParseError("metrics file '" + path.string() + "': missing config_hash line");
  }
  {
    std::istringstream iss(line.substr(2));
    std::string tok;
    while (iss >> tok) {
      const auto pos = tok.find('=');
      if (pos == std::string::npos) continue;
      const std::string key = tok.substr(0, pos);
      const std::string val = tok.substr(pos + 1);
      if (key == "config_hash") file.config_hash = parse_u64_hex(val, "config_hash");
      if (key == "seed") file.seed = static_cast<uint64_t>(parse_i64(val, "seed"));
    }
  }
  if (!std::getline(in, line) || line != MetricsWriter::header()) {
    throw ParseError("metrics file '" + path.string() + "': bad header row");
  }
  int line_no = 2;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 12) {
      throw ParseError("metrics file '" + path.string() + "' line " + std::to_string(line_no) +
                       ": expected 12 fields");
    }
    IterationMetrics m;
    m.iter = parse_i64(f[0], "iter");
    m.env_steps = parse_i64(f[1], "env_steps");
    m.delta_d = parse_double(f[2], "delta_d");
    m.delta_r = parse_double(f[3], "delta_r");
    m.sr_d = parse_double(f[4], "sr_d");
    m.sr_r = parse_double(f[5], "sr_r");
    m.loss_policy = parse_double(f[6], "loss_policy");
    m.loss_value = parse_double(f[7], "loss_value");
    m.entropy = parse_double(f[8], "entropy");
    m.mean_episode_length = parse_double(f[9], "mean_episode_length");
    if (!f[10].empty()) {
      EvalResult ev;
      ev.success_rate = parse_double(f[10], "eval_success_rate");
      ev.mean_success_length = parse_double(f[11], "eval_mean_success_length");
      m.eval = ev;
    }
    file.rows.push_back(m);
  }
  return file;
}

void truncate_metrics(const std::filesystem::path& path, int64_t keep_rows) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open metrics file '" + path.string() + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  in.close();
  const size_t keep = 2 + static_cast<size_t>(keep_rows);  // hash line + header + rows
  if (lines.size() < keep) {
    throw ParseError("metrics file '" + path.string() + "' has fewer rows than the checkpoint");
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot rewrite metrics file '" + path.string() + "'");
  for (size_t i = 0; i < keep; ++i) out << lines[i] << '\n';
}

}  // namespace acgd
