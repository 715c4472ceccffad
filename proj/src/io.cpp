#include "elpp/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace elpp {
namespace {

void dump_into(const json& j, std::string& out) {
  switch (j.type()) {
    case json::value_t::null:
      out += "null";
      break;
    case json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      break;
    case json::value_t::number_integer:
      out += std::to_string(j.get<std::int64_t>());
      break;
    case json::value_t::number_unsigned:
      out += std::to_string(j.get<std::uint64_t>());
      break;
    case json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "null";
      break;
    }
    case json::value_t::string:
      out += j.dump();
      break;
    case json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += ',';
        first = false;
        dump_into(e, out);
      }
      out += ']';
      break;
    }
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += json(it.key()).dump();
        out += ':';
        dump_into(it.value(), out);
      }
      out += '}';
      break;
    }
    default:
      throw ContractViolation("dump_json: unsupported value type");
  }
}

json point_json(const TimeSpacePoint& p) { return json::array({p.t, p.x}); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ContractViolation(std::string("environment JSON: missing field '") + key + "'");
  }
  return j.at(key);
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string dump_json(const json& j) {
  std::string out;
  dump_into(j, out);
  return out;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read error on '" + path + "'");
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write error on '" + path + "'");
}

json environment_to_json(const Environment& env) {
  json entries = json::array();
  for (const auto& e : env.entries) {
    entries.push_back(json::array({e.weight, e.location.t, e.location.x}));
  }
  return json{{"kind", to_string(env.kind)},
              {"box", {{"mode", to_string(env.box.mode)},
                       {"t_max", env.box.t_max},
                       {"x_max", env.box.x_max}}},
              {"alpha", env.alpha ? json(*env.alpha) : json(nullptr)},
              {"seed", {{"master", env.seed.master_seed}, {"stream", env.seed.stream_index}}},
              {"method", env.method},
              {"entries", entries}};
}

Environment environment_from_json(const json& j) {
  try {
    Environment env;
    env.kind = env_kind_from_string(field(j, "kind").get<std::string>());
    const json& box = field(j, "box");
    const BoxMode mode = box_mode_from_string(field(box, "mode").get<std::string>());
    const double t_max = field(box, "t_max").get<double>();
    const double x_max = field(box, "x_max").get<double>();
    if (mode == BoxMode::Lattice) {
      if (t_max != std::floor(t_max) || x_max != std::floor(x_max)) {
        throw ContractViolation("environment JSON: lattice box extents must be integers");
      }
      env.box = Box::lattice(static_cast<std::int64_t>(t_max), static_cast<std::int64_t>(x_max));
    } else {
      env.box = Box::continuous(t_max, x_max);
    }
    if (j.contains("alpha") && !j.at("alpha").is_null()) env.alpha = j.at("alpha").get<double>();
    if (j.contains("seed")) {
      const json& s = j.at("seed");
      env.seed = SeedSpec{field(s, "master").get<std::uint64_t>(), field(s, "stream").get<std::uint64_t>()};
    }
    if (j.contains("method")) env.method = j.at("method").get<std::string>();
    for (const auto& e : field(j, "entries")) {
      if (!e.is_array() || e.size() != 3) {
        throw ContractViolation("environment JSON: entries must be [w, t, x] triples");
      }
      env.entries.push_back(Entry{e[0].get<double>(), {e[1].get<double>(), e[2].get<double>()}});
    }
    env.validate();
    return env;
  } catch (const json::exception& ex) {
    throw ContractViolation(std::string("environment JSON: ") + ex.what());
  }
}

Environment read_environment(const std::string& path) {
  const std::string text = read_text(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& ex) {
    throw IoError("'" + path + "' is not valid JSON: " + ex.what());
  }
  return environment_from_json(j);
}

void write_environment(const std::string& path, const Environment& env) {
  write_text(path, dump_json(environment_to_json(env)) + "\n");
}

json lpp_to_json(const ElppResult& r, double budget) {
  json witness = json::array();
  for (const auto& p : r.witness.points) witness.push_back(point_json(p));
  return json{{"value", r.value},
              {"witness", witness},
              {"witness_entries", r.witness_entries},
              {"B", budget},
              {"entropy_of_witness", r.witness.entropy}};
}

json variational_to_json(const VariationalResult& r, const Environment& env) {
  json argmax = json::array();
  for (std::size_t i : r.argmax_entries) {
    const auto& e = env.entries.at(i);
    argmax.push_back(json::array({e.weight, e.location.t, e.location.x}));
  }
  return json{{"value", r.value},
              {"argmax", argmax},
              {"argmax_entries", r.argmax_entries},
              {"beta", r.beta},
              {"ell", r.ell_used},
              {"energy", r.energy},
              {"entropy", r.argmax.entropy}};
}

std::string sweep_csv(const BetaSweep& sweep) {
  std::string out = "beta,value,argmax_size\n";
  for (std::size_t i = 0; i < sweep.betas.size(); ++i) {
    out += format_double(sweep.betas[i]) + "," + format_double(sweep.values[i]) + "," +
           std::to_string(sweep.argmax_ids[i].size()) + "\n";
  }
  return out;
}

std::string volume_csv_header() { return "k,t,B,exact,mc_mean,mc_stderr,samples,seed,stream\n"; }

std::string volume_csv_row(const VolumeEstimate& v) {
  return std::to_string(v.k) + "," + format_double(v.t) + "," + format_double(v.B) + "," +
         format_double(v.exact) + "," + format_double(v.mc_mean) + "," +
         format_double(v.mc_stderr) + "," + std::to_string(v.samples) + "," +
         std::to_string(v.seed.master_seed) + "," + std::to_string(v.seed.stream_index) + "\n";
}

json to_json(const SummaryStats& s) {
  static constexpr const char* kLabels[] = {"q01", "q05", "q25", "q50", "q75", "q95", "q99"};
  json q = json::object();
  for (std::size_t i = 0; i < SummaryStats::kLevels.size(); ++i) q[kLabels[i]] = s.quantiles[i];
  return json{{"n_replicas", s.n_replicas},
              {"mean", s.mean},
              {"variance", s.variance},
              {"quantiles", q},
              {"ks_distance", s.ks_distance ? json(*s.ks_distance) : json(nullptr)}};
}

json experiment_metadata(const ExperimentResult& r) {
  return json{{"version", kVersion},
              {"generator_id", kGeneratorId},
              {"master_seed", r.master_seed},
              {"experiment", r.experiment},
              {"params", r.params}};
}

std::string records_jsonl(const ExperimentResult& r) {
  std::string out = dump_json(json{{"metadata", experiment_metadata(r)}}) + "\n";
  for (const auto& rec : r.records) {
    out += dump_json(json{{"experiment", rec.experiment},
                          {"replica", rec.replica},
                          {"params", rec.params},
                          {"seed", {{"master", rec.seed.master_seed}, {"stream", rec.seed.stream_index}}},
                          {"outputs", rec.outputs},
                          {"generator_id", rec.generator_id}});
    out += "\n";
  }
  return out;
}

std::string summary_csv(const ExperimentResult& r) {
  std::string out = "# " + dump_json(experiment_metadata(r)) + "\n";
  out += "quantity,n_replicas,mean,variance,q01,q05,q25,q50,q75,q95,q99,ks_distance\n";
  for (const auto& row : r.stats) {
    const auto& s = row.stats;
    out += row.quantity + "," + std::to_string(s.n_replicas) + "," + format_double(s.mean) + "," +
           format_double(s.variance);
    for (double q : s.quantiles) out += "," + format_double(q);
    out += ",";
    if (s.ks_distance) out += format_double(*s.ks_distance);
    out += "\n";
  }
  return out;
}

json summary_json(const ExperimentResult& r) {
  json rows = json::array();
  for (const auto& row : r.stats) {
    json s = to_json(row.stats);
    s["quantity"] = row.quantity;
    rows.push_back(s);
  }
  return json{{"metadata", experiment_metadata(r)}, {"stats", rows}, {"summary", r.summary}};
}

ExperimentResult parse_records_jsonl(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  ExperimentResult res;
  bool have_meta = false;
  try {
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const json j = json::parse(line);
      if (!have_meta) {
        const json& meta = j.at("metadata");
        res.experiment = meta.at("experiment").get<std::string>();
        res.params = meta.at("params");
        res.master_seed = meta.at("master_seed").get<std::uint64_t>();
        have_meta = true;
        continue;
      }
      ExperimentRecord rec;
      rec.experiment = j.at("experiment").get<std::string>();
      rec.replica = j.at("replica").get<std::size_t>();
      rec.params = j.at("params");
      rec.seed = SeedSpec{j.at("seed").at("master").get<std::uint64_t>(),
                          j.at("seed").at("stream").get<std::uint64_t>()};
      rec.outputs = j.at("outputs");
      rec.generator_id = j.at("generator_id").get<std::string>();
      res.records.push_back(std::move(rec));
    }
  } catch (const json::exception& ex) {
    throw ContractViolation(std::string("records JSONL: ") + ex.what());
  }
  if (!have_meta) throw ContractViolation("records JSONL: missing metadata line");
  summarize(res);
  return res;
}

}  // namespace elpp
