#include "acgd/demos.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "acgd/common.hpp"

namespace acgd {

namespace {
constexpr int kFormatVersionStates = 1;   // states only
constexpr int kFormatVersionActions = 2;  // states + actions
}  // namespace

Trajectory record_demonstration(Env& env, std::span<const TaskParam> registry, Rng& rng,
                                const RecordOptions& opts, const StepPolicy& policy) {
  const StepPolicy act = policy ? policy : [](const Env& e) { return e.expert_action(); };
  for (int attempt = 0; attempt < opts.max_retries; ++attempt) {
    const uint64_t episode_seed = rng.next_u64();
    Rng episode_rng(episode_seed);
    auto assignment = sample_assignment(registry, 0.0, ResetMode::kRegular, episode_rng);
    env.set_reward_mode(RewardMode::kSparse);
    env.reset_regular(assignment, episode_rng);

    Trajectory traj;
    traj.env_id = env.id();
    traj.params = assignment;
    traj.seed = episode_seed;
    traj.states.push_back(env.save_state());
    while (!env.done()) {
      Action a = act(env);
      if (opts.with_actions) traj.actions.push_back({a.dx, a.dy, a.dgrip});
      env.step(a);
      traj.states.push_back(env.save_state());
    }
    if (env.success() && traj.states.size() >= 2) return traj;
  }
  throw ExpertFailureError("expert failed to produce a successful demonstration on '" +
                           env.id() + "' within " + std::to_string(opts.max_retries) +
                           " attempts");
}

DemoStore record_demo_store(Env& env, std::span<const TaskParam> registry, int count,
                            uint64_t seed, const RecordOptions& opts) {
  DemoStore store;
  store.env_id = env.id();
  store.with_actions = opts.with_actions;
  Rng rng(seed, /*stream=*/0x64656d6f);  // "demo"
  for (int i = 0; i < count; ++i) {
    store.trajectories.push_back(record_demonstration(env, registry, rng, opts));
  }
  return store;
}

IndexRange sample_window(int64_t num_states, double delta_d) {
  if (num_states < 1) throw ConfigError("sample_window requires at least one state");
  const auto last = num_states - 1;
  auto first = static_cast<int64_t>(std::ceil((1.0 - delta_d) * static_cast<double>(last)));
  first = std::min(std::max<int64_t>(first, 0), last);
  return {first, last};
}

DemoRestart sample_demo_restart(const DemoStore& store, double delta_d, Rng& rng) {
  if (store.trajectories.empty()) {
    throw ConfigError("demonstration restarts require a non-empty demo store");
  }
  DemoRestart restart;
  restart.traj_index = static_cast<int64_t>(rng.uniform_int(store.trajectories.size()));
  restart.trajectory = &store.trajectories[restart.traj_index];
  const IndexRange window = sample_window(restart.trajectory->length(), delta_d);
  restart.state_index =
      window.first + static_cast<int64_t>(rng.uniform_int(static_cast<uint64_t>(window.size())));
  return restart;
}

// ---------------------------------------------------------------------------
// File format (line-delimited, canonical, checksummed):
//   demos format=<v> env=<id> count=<n> with_actions=<0|1>
//   traj index=<k> states=<n> recorder=<str> seed=<hex>
//   params delta=<f> mode=<regular|demo> <name>=<f> ...
//   S <reals...> | <words-hex...>
//   A <dx> <dy> <dgrip>            (format 2 only, after each S except last)
//   endtraj
//   checksum fnv1a64=<hex>
// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream iss(line);
  std::string tok;
  while (iss >> tok) out.push_back(tok);
  return out;
}

// "key=value" -> value; throws ParseError mentioning the line number.
std::string kv(const std::string& tok, std::string_view key, int line_no) {
  const auto pos = tok.find('=');
  if (pos == std::string::npos || tok.substr(0, pos) != key) {
    throw ParseError("demo file line " + std::to_string(line_no) + ": expected '" +
                     std::string(key) + "=...', got '" + tok + "'");
  }
  return tok.substr(pos + 1);
}

void write_params(std::ostream& os, const ParamAssignment& params) {
  os << "params delta=" << format_double(params.delta_used) << " mode="
     << (params.reset_mode == ResetMode::kRegular ? "regular" : "demo");
  for (const auto& [name, value] : params.values) {
    os << ' ' << name << '=' << format_double(value);
  }
  os << '\n';
}

ParamAssignment parse_params(const std::vector<std::string>& toks, int line_no) {
  if (toks.size() < 3 || toks[0] != "params") {
    throw ParseError("demo file line " + std::to_string(line_no) + ": malformed params record");
  }
  ParamAssignment params;
  params.delta_used = parse_double(kv(toks[1], "delta", line_no), "params delta");
  const std::string mode = kv(toks[2], "mode", line_no);
  params.reset_mode = mode == "regular" ? ResetMode::kRegular : ResetMode::kDemonstration;
  for (size_t i = 3; i < toks.size(); ++i) {
    const auto pos = toks[i].find('=');
    if (pos == std::string::npos) {
      throw ParseError("demo file line " + std::to_string(line_no) + ": malformed param '" +
                       toks[i] + "'");
    }
    params.values[toks[i].substr(0, pos)] =
        parse_double(toks[i].substr(pos + 1), "param value");
  }
  return params;
}

}  // namespace

void save_store(const DemoStore& store, const std::filesystem::path& path) {
  std::ostringstream body;
  const int version = store.with_actions ? kFormatVersionActions : kFormatVersionStates;
  body << "demos format=" << version << " env=" << store.env_id
       << " count=" << store.trajectories.size() << " with_actions=" << (store.with_actions ? 1 : 0)
       << '\n';
  for (size_t k = 0; k < store.trajectories.size(); ++k) {
    const Trajectory& traj = store.trajectories[k];
    body << "traj index=" << k << " states=" << traj.states.size()
         << " recorder=" << traj.recorder << " seed=" << format_u64_hex(traj.seed) << '\n';
    write_params(body, traj.params);
    for (size_t t = 0; t < traj.states.size(); ++t) {
      const EnvSnapshot& s = traj.states[t];
      body << 'S';
      for (double v : s.reals) body << ' ' << format_double(v);
      body << " |";
      for (uint64_t w : s.words) body << ' ' << format_u64_hex(w);
      body << '\n';
      if (store.with_actions && t + 1 < traj.states.size()) {
        const auto& a = traj.actions.at(t);
        body << "A " << format_double(a[0]) << ' ' << format_double(a[1]) << ' '
             << format_double(a[2]) << '\n';
      }
    }
    body << "endtraj\n";
  }
  const std::string content = body.str();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content << "checksum fnv1a64=" << format_u64_hex(fnv1a64(content)) << '\n';
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

DemoStore load_store(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open demo store '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string content = buffer.str();

  const auto checksum_pos = content.rfind("checksum fnv1a64=");
  if (checksum_pos == std::string::npos) {
    throw ParseError("demo store '" + path.string() + "': missing checksum line (truncated file?)");
  }
  const std::string body = content.substr(0, checksum_pos);
  std::string checksum_line = content.substr(checksum_pos);
  while (!checksum_line.empty() && (checksum_line.back() == '\n' || checksum_line.back() == '\r')) {
    checksum_line.pop_back();
  }
  const uint64_t stated =
      parse_u64_hex(checksum_line.substr(std::string("checksum fnv1a64=").size()), "checksum");
  const uint64_t actual = fnv1a64(body);
  if (stated != actual) {
    throw ParseError("demo store '" + path.string() + "': checksum mismatch (file corrupted): " +
                     format_u64_hex(actual) + " != " + format_u64_hex(stated));
  }

  std::istringstream is(body);
  std::string line;
  int line_no = 0;
  auto next_line = [&]() -> bool {
    if (!std::getline(is, line)) return false;
    ++line_no;
    return true;
  };

  if (!next_line()) throw ParseError("demo store '" + path.string() + "': empty file");
  auto header = split_ws(line);
  if (header.size() != 5 || header[0] != "demos") {
    throw ParseError("demo store '" + path.string() + "': bad header");
  }
  const int version = static_cast<int>(parse_i64(kv(header[1], "format", line_no), "format"));
  if (version != kFormatVersionStates && version != kFormatVersionActions) {
    throw ParseError("demo store '" + path.string() + "': unsupported format version " +
                     std::to_string(version));
  }
  DemoStore store;
  store.env_id = kv(header[2], "env", line_no);
  const int64_t count = parse_i64(kv(header[3], "count", line_no), "count");
  store.with_actions = parse_i64(kv(header[4], "with_actions", line_no), "with_actions") != 0;
  if (store.with_actions != (version == kFormatVersionActions)) {
    throw ParseError("demo store '" + path.string() + "': with_actions flag disagrees with format");
  }

  for (int64_t k = 0; k < count; ++k) {
    if (!next_line()) {
      throw ParseError("demo store '" + path.string() + "': truncated at trajectory " +
                       std::to_string(k) + " (line " + std::to_string(line_no) + ")");
    }
    auto ttoks = split_ws(line);
    if (ttoks.size() != 5 || ttoks[0] != "traj") {
      throw ParseError("demo store line " + std::to_string(line_no) + ": expected traj header");
    }
    Trajectory traj;
    traj.env_id = store.env_id;
    if (parse_i64(kv(ttoks[1], "index", line_no), "traj index") != k) {
      throw ParseError("demo store line " + std::to_string(line_no) + ": trajectory index out of order");
    }
    const int64_t n_states = parse_i64(kv(ttoks[2], "states", line_no), "states");
    if (n_states < 2) {
      throw ParseError("demo store line " + std::to_string(line_no) +
                       ": trajectory needs at least 2 states");
    }
    traj.recorder = kv(ttoks[3], "recorder", line_no);
    traj.seed = parse_u64_hex(kv(ttoks[4], "seed", line_no), "traj seed");

    if (!next_line()) {
      throw ParseError("demo store '" + path.string() + "': truncated params of trajectory " +
                       std::to_string(k));
    }
    traj.params = parse_params(split_ws(line), line_no);

    for (int64_t t = 0; t < n_states; ++t) {
      if (!next_line()) {
        throw ParseError("demo store '" + path.string() + "': truncated at trajectory " +
                         std::to_string(k) + " state " + std::to_string(t) + " (line " +
                         std::to_string(line_no) + ")");
      }
      auto stoks = split_ws(line);
      if (stoks.empty() || stoks[0] != "S") {
        throw ParseError("demo store line " + std::to_string(line_no) + ": expected state record");
      }
      EnvSnapshot snap;
      snap.env_id = store.env_id;
      snap.params = traj.params;
      size_t i = 1;
      for (; i < stoks.size() && stoks[i] != "|"; ++i) {
        snap.reals.push_back(parse_double(stoks[i], "state real"));
      }
      if (i == stoks.size()) {
        throw ParseError("demo store line " + std::to_string(line_no) +
                         ": state record missing '|' separator");
      }
      for (++i; i < stoks.size(); ++i) {
        snap.words.push_back(parse_u64_hex(stoks[i], "state word"));
      }
      traj.states.push_back(std::move(snap));

      if (store.with_actions && t + 1 < n_states) {
        if (!next_line()) {
          throw ParseError("demo store '" + path.string() + "': truncated action record at line " +
                           std::to_string(line_no));
        }
        auto atoks = split_ws(line);
        if (atoks.size() != 4 || atoks[0] != "A") {
          throw ParseError("demo store line " + std::to_string(line_no) +
                           ": expected action record");
        }
        traj.actions.push_back({parse_double(atoks[1], "action dx"),
                                parse_double(atoks[2], "action dy"),
                                parse_double(atoks[3], "action dgrip")});
      }
    }
    if (!next_line() || line != "endtraj") {
      throw ParseError("demo store '" + path.string() + "': missing endtraj for trajectory " +
                       std::to_string(k) + " (line " + std::to_string(line_no) + ")");
    }
    store.trajectories.push_back(std::move(traj));
  }
  return store;
}

}  // namespace acgd
