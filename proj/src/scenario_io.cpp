#include "aflsim/scenario_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace aflsim {

using nlohmann::json;

namespace {

class Reader {
 public:
  Reader(const json& obj, std::string where, std::vector<std::string>& errs)
      : obj_(obj), where_(std::move(where)), errs_(errs) {
    if (!obj_.is_object()) errs_.push_back(where_ + " must be an object");
  }

  ~Reader() {
    if (!obj_.is_object()) return;
    for (const auto& [key, _] : obj_.items())
      if (!used_.count(key)) errs_.push_back("unknown key \"" + key + "\" in " + where_);
  }

  template <typename T>
  void get(const char* key, T& out, bool required = true) {
    used_.insert(key);
    if (!obj_.is_object()) return;
    auto it = obj_.find(key);
    if (it == obj_.end()) {
      if (required) errs_.push_back("missing key \"" + std::string(key) + "\" in " + where_);
      return;
    }
    try {
      out = it->template get<T>();
    } catch (const json::exception& e) {
      errs_.push_back(where_ + "." + key + ": " + e.what());
    }
  }

  void get_money(const char* key, Money& out, bool required = true) {
    double v = 0.0;
    bool present = obj_.is_object() && obj_.contains(key);
    get(key, v, required);
    if (present) out = Money::from_real(v);
  }

 private:
  const json& obj_;
  std::string where_;
  std::vector<std::string>& errs_;
  std::set<std::string> used_;
};

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ScenarioError({std::string("malformed JSON: ") + e.what()});
  }

  Scenario s;
  std::vector<std::string> errs;
  {
    Reader top(doc, "scenario", errs);
    json federation = json::object(), owners = json::array(), oracle = json::object(), bidding = json::object();
    top.get("federation", federation);
    top.get("owners", owners);
    top.get("oracle", oracle, false);
    top.get("bidding", bidding, false);

    {
      auto& f = s.federation;
      Reader r(federation, "federation", errs);
      r.get_money("total_budget", f.total_budget);
      r.get("horizon", f.horizon);
      r.get("value_weight", f.value_weight);
      r.get("reputation_threshold", f.reputation_threshold);
      r.get("reputation_discount", f.reputation_discount, false);
      r.get("improvement_thresholds", f.improvement_thresholds);
      r.get("energy_weight", f.energy_weight);
      r.get("comm_norm", f.comm_norm);
      r.get("global_model_bits", f.global_model_bits);
      r.get("subchannel_count", f.subchannel_count);
      r.get("subchannel_bandwidth", f.subchannel_bandwidth);
      r.get("noise", f.noise);
      r.get("cpu_freq", f.cpu_freq);
      r.get("cycles_per_update", f.cycles_per_update);
      r.get("capacitance", f.capacitance);
      r.get("train_window", f.train_window);
      r.get("revenue_scale", f.revenue_scale);
      r.get("target_performance", f.target_performance);
    }

    if (!owners.is_array()) {
      errs.emplace_back("owners must be an array");
    } else {
      for (std::size_t i = 0; i < owners.size(); ++i) {
        DataOwnerProfile o;
        Reader r(owners[i], "owners[" + std::to_string(i) + "]", errs);
        r.get("id", o.id);
        r.get_money("private_cost", o.private_cost);
        r.get("latent_quality", o.latent_quality);
        r.get("update_size_bits", o.update_size_bits);
        r.get("channel_gain", o.channel_gain);
        r.get("uplink_power", o.uplink_power);
        s.owners.push_back(o);
      }
    }

    {
      auto& q = s.oracle;
      Reader r(oracle, "oracle", errs);
      r.get("initial_performance", q.initial_performance, false);
      r.get("xi_max", q.xi_max, false);
      r.get("gain", q.gain, false);
      r.get("saturation", q.saturation, false);
      r.get("noise_sd", q.noise_sd, false);
      r.get("trace_file", q.trace_file, false);
    }
    {
      auto& b = s.bidding;
      Reader r(bidding, "bidding", errs);
      r.get("adjust_rate", b.adjust_rate, false);
      r.get("initial_markup_min", b.initial_markup_min, false);
      r.get("initial_markup_max", b.initial_markup_max, false);
    }
  }
  if (!errs.empty()) throw ScenarioError(std::move(errs));
  validate_scenario(s);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError({"cannot read scenario file " + path.string()});
  std::stringstream buf;
  buf << in.rdbuf();
  Scenario s = parse_scenario(buf.str());
  if (!s.oracle.trace_file.empty() && std::filesystem::path(s.oracle.trace_file).is_relative())
    s.oracle.trace_file = (path.parent_path() / s.oracle.trace_file).string();
  return s;
}

std::string dump_scenario(const Scenario& s, int indent) {
  const auto& f = s.federation;
  json federation = {
      {"total_budget", f.total_budget.to_real()},
      {"horizon", f.horizon},
      {"value_weight", f.value_weight},
      {"reputation_threshold", f.reputation_threshold},
      {"reputation_discount", f.reputation_discount},
      {"improvement_thresholds", f.improvement_thresholds},
      {"energy_weight", f.energy_weight},
      {"comm_norm", f.comm_norm},
      {"global_model_bits", f.global_model_bits},
      {"subchannel_count", f.subchannel_count},
      {"subchannel_bandwidth", f.subchannel_bandwidth},
      {"noise", f.noise},
      {"cpu_freq", f.cpu_freq},
      {"cycles_per_update", f.cycles_per_update},
      {"capacitance", f.capacitance},
      {"train_window", f.train_window},
      {"revenue_scale", f.revenue_scale},
      {"target_performance", f.target_performance},
  };
  json owners = json::array();
  for (const auto& o : s.owners) {
    owners.push_back({{"id", o.id},
                      {"private_cost", o.private_cost.to_real()},
                      {"latent_quality", o.latent_quality},
                      {"update_size_bits", o.update_size_bits},
                      {"channel_gain", o.channel_gain},
                      {"uplink_power", o.uplink_power}});
  }
  json oracle = {{"initial_performance", s.oracle.initial_performance},
                 {"xi_max", s.oracle.xi_max},
                 {"gain", s.oracle.gain},
                 {"saturation", s.oracle.saturation},
                 {"noise_sd", s.oracle.noise_sd}};
  if (!s.oracle.trace_file.empty()) oracle["trace_file"] = s.oracle.trace_file;
  json bidding = {{"adjust_rate", s.bidding.adjust_rate},
                  {"initial_markup_min", s.bidding.initial_markup_min},
                  {"initial_markup_max", s.bidding.initial_markup_max}};
  json doc = {{"federation", federation}, {"owners", owners}, {"oracle", oracle}, {"bidding", bidding}};
  return doc.dump(indent);
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << dump_scenario(scenario) << '\n';
}

}  // namespace aflsim
