#include "etpla/config.hpp"

#include "etpla/error.hpp"
#include "json.hpp"

namespace etpla {

namespace {

using nlohmann::json;

double get_num(const json& doc, const char* key, double fallback) {
  if (!doc.contains(key)) return fallback;
  if (!doc.at(key).is_number()) throw Error(ErrorCode::Malformed, std::string(key) + " must be numeric");
  return doc.at(key).get<double>();
}

void check_nonnegative(double v, const char* key) {
  if (v < 0) throw Error(ErrorCode::Malformed, std::string(key) + " must be >= 0");
}

}  // namespace

const char* strategy_name(Strategy s) { return s == Strategy::Single ? "single" : "multi"; }

Strategy strategy_from_name(const std::string& name) {
  if (name == "single" || name == "SINGLE") return Strategy::Single;
  if (name == "multi" || name == "MULTI") return Strategy::Multi;
  throw Error(ErrorCode::Malformed, "strategy '" + name + "' (use single or multi)");
}

PipelineConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Malformed, std::string("config json: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::Malformed, "config must be a json object");

  PipelineConfig cfg;
  cfg.schema_version = static_cast<int>(get_num(doc, "schema_version", 1));
  if (cfg.schema_version != 1) {
    throw Error(ErrorCode::Malformed, "unsupported config schema_version");
  }
  cfg.thread_ohm_per_m = get_num(doc, "thread_ohm_per_m", cfg.thread_ohm_per_m);
  cfg.supply_volts = get_num(doc, "supply_volts", cfg.supply_volts);
  if (cfg.supply_volts <= 0) throw Error(ErrorCode::Malformed, "supply_volts must be > 0");

  if (doc.contains("bjt")) {
    const auto& b = doc.at("bjt");
    cfg.bjt.model = b.value("model", cfg.bjt.model);
    cfg.bjt.vbe_on = get_num(b, "vbe_on", cfg.bjt.vbe_on);
    cfg.bjt.vce_sat = get_num(b, "vce_sat", cfg.bjt.vce_sat);
    cfg.bjt.beta = get_num(b, "beta", cfg.bjt.beta);
    if (cfg.bjt.vbe_on <= 0 || cfg.bjt.vce_sat < 0 || cfg.bjt.beta < 1) {
      throw Error(ErrorCode::Malformed, "bjt model out of range");
    }
  }
  if (doc.contains("leds")) {
    for (const auto& [name, spec] : doc.at("leds").items()) {
      LedModel led = cfg.led_models.count(name) ? cfg.led_models[name] : LedModel{};
      led.vf = get_num(spec, "vf", led.vf);
      led.i_on = get_num(spec, "i_on", led.i_on);
      led.i_dim = get_num(spec, "i_dim", led.i_dim);
      if (led.vf <= 0 || led.i_dim <= 0 || led.i_dim >= led.i_on) {
        throw Error(ErrorCode::Malformed, "led model '" + name + "' out of range");
      }
      cfg.led_models[name] = led;
    }
  }
  if (doc.contains("led_assignment")) {
    cfg.led_assignment = doc.at("led_assignment").get<std::vector<std::string>>();
    if (cfg.led_assignment.empty()) throw Error(ErrorCode::Malformed, "led_assignment empty");
    for (const auto& name : cfg.led_assignment) {
      if (!cfg.led_models.count(name)) {
        throw Error(ErrorCode::Malformed, "led_assignment references unknown model '" + name + "'");
      }
    }
  }
  cfg.led_series_ohm = get_num(doc, "led_series_ohm", cfg.led_series_ohm);
  cfg.contact_ohm = get_num(doc, "contact_ohm", cfg.contact_ohm);
  cfg.bridge_contact_ohm = get_num(doc, "bridge_contact_ohm", cfg.bridge_contact_ohm);
  cfg.battery_contact_ohm = get_num(doc, "battery_contact_ohm", cfg.battery_contact_ohm);
  cfg.input_contact_ohm = get_num(doc, "input_contact_ohm", cfg.input_contact_ohm);
  cfg.leak_high_ohm = get_num(doc, "leak_high_ohm", cfg.leak_high_ohm);
  cfg.leak_medium_ohm = get_num(doc, "leak_medium_ohm", cfg.leak_medium_ohm);
  cfg.logic_threshold_volts = get_num(doc, "logic_threshold_volts", cfg.logic_threshold_volts);
  cfg.gmin = get_num(doc, "gmin", cfg.gmin);
  cfg.max_solver_iterations = static_cast<int>(get_num(doc, "max_solver_iterations", 100));
  for (double v : {cfg.thread_ohm_per_m, cfg.led_series_ohm, cfg.contact_ohm,
                   cfg.bridge_contact_ohm, cfg.battery_contact_ohm, cfg.input_contact_ohm,
                   cfg.leak_high_ohm, cfg.leak_medium_ohm}) {
    check_nonnegative(v, "resistance");
  }

  if (doc.contains("panel")) {
    cfg.panel.width_cm = get_num(doc.at("panel"), "width_cm", cfg.panel.width_cm);
    cfg.panel.height_cm = get_num(doc.at("panel"), "height_cm", cfg.panel.height_cm);
    if (cfg.panel.width_cm <= 0 || cfg.panel.height_cm <= 0) {
      throw Error(ErrorCode::Malformed, "panel dimensions must be > 0");
    }
  }
  if (doc.contains("strategy")) cfg.strategy = strategy_from_name(doc.at("strategy"));
  if (doc.contains("parasitics")) {
    const std::string s = doc.at("parasitics");
    if (s == "nominal") {
      cfg.parasitics = ParasiticScenario::Nominal;
    } else if (s == "worst_case") {
      cfg.parasitics = ParasiticScenario::WorstCase;
    } else {
      throw Error(ErrorCode::Malformed, "parasitics '" + s + "' (use nominal or worst_case)");
    }
  }
  if (doc.contains("scenario")) {
    const auto& s = doc.at("scenario");
    auto& sc = cfg.scenario;
    sc.p_short_high = get_num(s, "p_short_high", sc.p_short_high);
    sc.p_short_medium = get_num(s, "p_short_medium", sc.p_short_medium);
    sc.p_joint_loosen = get_num(s, "p_joint_loosen", sc.p_joint_loosen);
    sc.p_joint_loosen_strained = get_num(s, "p_joint_loosen_strained", sc.p_joint_loosen_strained);
    sc.joint_loosen_ohm = get_num(s, "joint_loosen_ohm", sc.joint_loosen_ohm);
    sc.stretch_strain = get_num(s, "stretch_strain", sc.stretch_strain);
    sc.trials = static_cast<int>(get_num(s, "trials", sc.trials));
    if (s.contains("stretch_axis")) {
      const std::string axis = s.at("stretch_axis");
      if (axis == "vertical") {
        sc.stretch_axis = StretchAxis::Vertical;
      } else if (axis == "horizontal") {
        sc.stretch_axis = StretchAxis::Horizontal;
      } else {
        throw Error(ErrorCode::Malformed, "stretch_axis '" + axis + "'");
      }
    }
    for (double p : {sc.p_short_high, sc.p_short_medium, sc.p_joint_loosen,
                     sc.p_joint_loosen_strained}) {
      if (p < 0 || p > 1) throw Error(ErrorCode::Malformed, "scenario probability outside [0,1]");
    }
    if (sc.trials < 1) throw Error(ErrorCode::Malformed, "scenario trials must be >= 1");
  }
  if (doc.contains("seed")) cfg.seed = doc.at("seed").get<std::uint64_t>();
  return cfg;
}

std::string config_to_json(const PipelineConfig& cfg) {
  json leds = json::object();
  for (const auto& [name, led] : cfg.led_models) {
    leds[name] = {{"vf", led.vf}, {"i_on", led.i_on}, {"i_dim", led.i_dim}};
  }
  json doc = {
      {"schema_version", cfg.schema_version},
      {"thread_ohm_per_m", cfg.thread_ohm_per_m},
      {"supply_volts", cfg.supply_volts},
      {"bjt",
       {{"model", cfg.bjt.model},
        {"vbe_on", cfg.bjt.vbe_on},
        {"vce_sat", cfg.bjt.vce_sat},
        {"beta", cfg.bjt.beta}}},
      {"leds", leds},
      {"led_assignment", cfg.led_assignment},
      {"led_series_ohm", cfg.led_series_ohm},
      {"contact_ohm", cfg.contact_ohm},
      {"bridge_contact_ohm", cfg.bridge_contact_ohm},
      {"battery_contact_ohm", cfg.battery_contact_ohm},
      {"input_contact_ohm", cfg.input_contact_ohm},
      {"leak_high_ohm", cfg.leak_high_ohm},
      {"leak_medium_ohm", cfg.leak_medium_ohm},
      {"logic_threshold_volts", cfg.logic_threshold_volts},
      {"gmin", cfg.gmin},
      {"max_solver_iterations", cfg.max_solver_iterations},
      {"panel", {{"width_cm", cfg.panel.width_cm}, {"height_cm", cfg.panel.height_cm}}},
      {"strategy", strategy_name(cfg.strategy)},
      {"parasitics", cfg.parasitics == ParasiticScenario::Nominal ? "nominal" : "worst_case"},
      {"scenario",
       {{"p_short_high", cfg.scenario.p_short_high},
        {"p_short_medium", cfg.scenario.p_short_medium},
        {"p_joint_loosen", cfg.scenario.p_joint_loosen},
        {"p_joint_loosen_strained", cfg.scenario.p_joint_loosen_strained},
        {"joint_loosen_ohm", cfg.scenario.joint_loosen_ohm},
        {"stretch_strain", cfg.scenario.stretch_strain},
        {"stretch_axis",
         cfg.scenario.stretch_axis == StretchAxis::Vertical ? "vertical" : "horizontal"},
        {"trials", cfg.scenario.trials}}},
      {"seed", cfg.seed},
  };
  return doc.dump(2) + "\n";
}

}  // namespace etpla
