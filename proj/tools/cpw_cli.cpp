#include <fstream>
#include <iostream>
#include <memory>

#include <CLI11.hpp>
#include <json.hpp>

#include "cpw/avoidsucc.hpp"
#include "cpw/cohesive.hpp"
#include "cpw/harness.hpp"
#include "cpw/structures.hpp"

using namespace cpw;
using nlohmann::json;

namespace {

json verdict_json(const Verdict& v) {
  json j{{"verdict", to_string(v.value)},
         {"horizon",
          {{"window_bound", v.horizon.window_bound},
           {"step_budget", v.horizon.step_budget},
           {"tail_window", v.horizon.tail_window},
           {"cut", v.horizon.cut}}}};
  if (v.witness) j["witness"] = *v.witness;
  return j;
}

void emit(const harness::ExperimentConfig& cfg, const json& j) {
  if (cfg.out_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream out(cfg.out_path);
    if (!out) throw std::runtime_error("cannot write " + cfg.out_path);
    out << j.dump(2) << "\n";
  }
}

cohesive::CohesiveView window_for(const std::string& base, Nat bound) {
  cohesive::CohesiveView v;
  v.window_bound = bound;
  for (Nat n = 0; n <= bound; ++n) {
    bool in_c = base == "lemma5" ? !avoidsucc::toy_R(n) : true;
    (in_c ? v.included : v.excluded).push_back(n);
  }
  return v;
}

power::PowerContext context_for(const std::string& base, const harness::ExperimentConfig& cfg,
                                std::shared_ptr<pcf::Machine> machine) {
  return power::make_context(harness::order_by_name(base, cfg.stages),
                             window_for(base, cfg.window_bound), cfg.horizon(),
                             std::move(machine));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cohesive-power workbench"};
  app.require_subcommand(1);

  harness::ExperimentConfig cfg;
  std::string config_path;
  app.add_option("--config", config_path, "key=value config file (flags override it)");
  auto* wopt = app.add_option("--window", cfg.window_bound, "window bound");
  auto* sopt = app.add_option("--steps", cfg.step_budget, "per-point step budget");
  auto* topt = app.add_option("--tail", cfg.tail_window, "tail window");
  auto* copt = app.add_option("--cut", cfg.cut, "ignore points below this");
  auto* gopt = app.add_option("--stages", cfg.stages, "construction stages");
  auto* dopt = app.add_option("--seed", cfg.seed, "sampling seed");
  auto* oopt = app.add_option("--out", cfg.out_path, "report output path");

  // --- maximal ---------------------------------------------------------------
  auto* maximal = app.add_subcommand("maximal", "run the marker construction");
  bool bare_numbering = false;
  maximal->add_flag("--bare", bare_numbering, "use the raw bit numbering instead of the probe slots");

  // --- order -----------------------------------------------------------------
  auto* order = app.add_subcommand("order", "query a registered order presentation");
  std::string order_name = "nat";
  std::vector<Nat> cmp;
  Nat axioms_bound = 0;
  order->add_option("--name", order_name, "nat|int|rat|nqz|thm4:toy|thm4:simple|lemma5");
  order->add_option("--cmp", cmp, "two codes to compare")->expected(2);
  order->add_option("--axioms", axioms_bound, "check order axioms on [0..N]");

  // --- power -----------------------------------------------------------------
  auto* powercmd = app.add_subcommand("power", "compare and build cohesive-power elements");
  std::string base_name = "thm4:toy", elem_a = "id", elem_b, op = "less";
  powercmd->add_option("--base", base_name, "base order name");
  powercmd->add_option("--a", elem_a, "const:<n> | id | 2id | prog:<i> | compose:<i>:<j>");
  powercmd->add_option("--b", elem_b, "second element for binary operations");
  powercmd->add_option("--op", op, "less|eq|succ|pred|blocks|mid");

  // --- formula ---------------------------------------------------------------
  auto* formula = app.add_subcommand("formula", "parse, classify and evaluate formulas");
  std::string formula_text, corpus_path;
  bool do_eval = false, bounded_complete = false;
  Nat search_bound = 100;
  formula->add_option("--text", formula_text, "inline formula");
  formula->add_option("--file", corpus_path, "corpus file (one formula per line, # name comments)");
  formula->add_flag("--eval", do_eval, "evaluate sentences over the naturals");
  formula->add_flag("--complete", bounded_complete, "treat the search bound as exhaustive");
  formula->add_option("--bound", search_bound, "quantifier search bound");

  // --- ma --------------------------------------------------------------------
  auto* ma = app.add_subcommand("ma", "the one-relation structure family");
  ma->require_subcommand(1);
  auto* ma_build = ma->add_subcommand("build", "replay an instance and summarize it");
  std::string ma_instance = "d";
  ma_build->add_option("--instance", ma_instance, "d|c");
  auto* ma_check = ma->add_subcommand("check", "brute-force the structural facts");
  Nat ma_bound = 200;
  ma_check->add_option("--bound", ma_bound, "triple bound");
  auto* ma_psi = ma->add_subcommand("psi", "maximum-element evidence experiments");

  // --- lemma5 ----------------------------------------------------------------
  auto* lemma5 = app.add_subcommand("lemma5", "successor-avoiding stage construction");
  lemma5->require_subcommand(1);
  auto* l5_run = lemma5->add_subcommand("run", "replay and emit the action log");
  bool toy_c = true;
  l5_run->add_flag("--toy-c", toy_c, "use the computable toy R (default)");
  auto* l5_star = lemma5->add_subcommand("star", "no-tracked-successor check");
  Nat emax = 8, nmax = 500;
  l5_star->add_option("--emax", emax, "program indices below this");
  l5_star->add_option("--nmax", nmax, "points up to this");
  auto* l5_between = lemma5->add_subcommand("between", "split a candidate successor of [id]");
  std::string phi_spec;
  l5_between->add_option("--phi", phi_spec, "element spec for phi")->required();

  // --- exp -------------------------------------------------------------------
  auto* exp = app.add_subcommand("exp", "run a named experiment");
  std::string exp_name = "all";
  exp->add_option("name", exp_name, "properties_lo|thm4|ma|lemma5|ftcp|all");

  for (CLI::App* sub : app.get_subcommands({})) {
    sub->fallthrough();
    for (CLI::App* nested : sub->get_subcommands({})) nested->fallthrough();
  }
  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_path.empty()) {
      harness::ExperimentConfig from_file = harness::apply_config_file(cfg, config_path);
      // flags the user actually passed beat the file
      if (wopt->count() == 0) cfg.window_bound = from_file.window_bound;
      if (sopt->count() == 0) cfg.step_budget = from_file.step_budget;
      if (topt->count() == 0) cfg.tail_window = from_file.tail_window;
      if (copt->count() == 0) cfg.cut = from_file.cut;
      if (gopt->count() == 0) cfg.stages = from_file.stages;
      if (dopt->count() == 0) cfg.seed = from_file.seed;
      if (oopt->count() == 0) cfg.out_path = from_file.out_path;
    }
    cfg.validate();

    if (*maximal) {
      pcf::Machine machine = bare_numbering ? pcf::Machine{} : harness::probe_machine();
      cohesive::MaximalSetApprox a = cohesive::build_maximal(cfg.stages, machine);
      cohesive::CohesiveView v = cohesive::view_of(a, std::min(cfg.window_bound, cfg.stages));
      json j{{"schema", 1},
             {"stages", a.stages},
             {"members", a.enumeration.size()},
             {"marker_moves", a.moved_log.size()},
             {"first_markers", std::vector<Nat>(a.markers.begin(),
                                                a.markers.begin() + std::min<std::size_t>(
                                                                        12, a.markers.size()))},
             {"window_included", v.included.size()},
             {"window_excluded", v.excluded.size()}};
      emit(cfg, j);
    } else if (*order) {
      orders::CompOrder L = harness::order_by_name(order_name, cfg.stages);
      json j{{"schema", 1}, {"order", order_name}};
      if (!cmp.empty()) {
        j["cmp"] = {{"x", cmp[0]}, {"y", cmp[1]}, {"less", L.less(cmp[0], cmp[1])}};
      }
      if (axioms_bound > 0) {
        std::vector<Nat> sample;
        for (Nat x = 0; x <= axioms_bound; ++x)
          if (L.in_domain(x)) sample.push_back(x);
        orders::AxiomsReport r = orders::axioms_check(L, sample);
        j["axioms"] = {{"ok", r.ok}, {"violation", r.violation}, {"sample", sample.size()}};
      }
      emit(cfg, j);
    } else if (*powercmd) {
      auto machine = std::make_shared<pcf::Machine>();
      power::PowerContext ctx = context_for(base_name, cfg, machine);
      power::PowerElement a = harness::parse_element(ctx, elem_a);
      json j{{"schema", 1}, {"base", base_name}, {"a", elem_a}, {"op", op}};
      if (op == "less" || op == "eq" || op == "blocks" || op == "mid") {
        if (elem_b.empty()) throw std::runtime_error("--b is required for op " + op);
        power::PowerElement b = harness::parse_element(ctx, elem_b);
        j["b"] = elem_b;
        if (op == "less") j["result"] = verdict_json(power::less_c(ctx, a, b));
        else if (op == "eq") j["result"] = verdict_json(power::eq_c(ctx, a, b));
        else if (op == "blocks") j["result"] = verdict_json(power::blocks_far_apart(ctx, a, b));
        else {
          power::MidpointResult m = power::midpoint_theta(ctx, a, b);
          j["result"] = {{"display", m.elem.display},
                         {"parity_ok", m.parity_ok},
                         {"between_ok", m.between_ok}};
        }
      } else if (op == "succ" || op == "pred") {
        if (base_name != "thm4:toy")
          throw std::runtime_error("succ/pred need the parameterized base thm4:toy");
        orders::Injection f = orders::toy_injection();
        power::SuccResult r =
            op == "succ" ? power::thm4_succ(ctx, f, a) : power::thm4_pred(ctx, f, a);
        json tally = json::object();
        for (auto& [k, v] : r.tally) tally[k] = v;
        j["result"] = {{"display", r.elem.display},
                       {"case", power::to_string(r.tag)},
                       {"tally", tally},
                       {"postcondition_ok", r.postcondition_ok},
                       {"domain", verdict_json(r.elem.domain_status)}};
      } else {
        throw std::runtime_error("unknown op: " + op);
      }
      emit(cfg, j);
    } else if (*formula) {
      std::vector<std::pair<std::string, formulas::FormulaPtr>> items;
      if (!formula_text.empty()) items.emplace_back("inline", formulas::parse(formula_text));
      if (!corpus_path.empty())
        for (auto& [name, f] : formulas::load_corpus(corpus_path)) items.emplace_back(name, f);
      if (items.empty()) throw std::runtime_error("give --text or --file");
      json out = json::array();
      formulas::BaseModel model = power::order_model(orders::std_nat());
      for (auto& [name, f] : items) {
        json j{{"name", name},
               {"formula", formulas::print(f)},
               {"classification", formulas::to_string(formulas::classify(f))}};
        if (do_eval) {
          formulas::EvalOptions opts;
          opts.search_bound = search_bound;
          opts.bounded_complete = bounded_complete;
          j["eval"] = verdict_json(formulas::eval_base(model, f, {}, opts));
        }
        out.push_back(std::move(j));
      }
      emit(cfg, json{{"schema", 1}, {"formulas", out}});
    } else if (*ma) {
      pcf::Machine machine = harness::probe_machine();
      auto build_instance = [&](const std::string& kind) {
        if (kind == "d") return structures::make_d_instance(cfg.stages, 4 * cfg.stages);
        cohesive::MaximalSetApprox a = cohesive::build_maximal(cfg.stages, machine);
        return structures::make_c_instance(a, 4 * cfg.stages);
      };
      if (*ma_build) {
        structures::MAStructure m = build_instance(ma_instance);
        emit(cfg, json{{"schema", 1},
                       {"instance", ma_instance},
                       {"name", m.name},
                       {"stage", m.stage},
                       {"enumerated", m.a1_enum.size()},
                       {"backward_arrows", m.b_by_rank.size()},
                       {"window_limit", m.window_limit}});
      } else if (*ma_check) {
        structures::MAStructure m = build_instance(ma_instance);
        structures::FactsReport r = structures::check_facts_1_to_4(m, ma_bound, m.stage);
        emit(cfg, json{{"schema", 1},
                       {"instance", ma_instance},
                       {"triples_checked", r.triples_checked},
                       {"facts", json{{"1", r.fact1}, {"2", r.fact2}, {"3", r.fact3},
                                      {"4", r.fact4}}},
                       {"ok", r.ok()}});
      } else if (*ma_psi) {
        harness::Report r = harness::exp_ma(cfg);
        emit(cfg, r.to_json());
      }
    } else if (*lemma5) {
      pcf::Machine machine;
      avoidsucc::ConstructionState st =
          avoidsucc::run_construction(cfg.stages, avoidsucc::toy_R, machine);
      if (*l5_run) {
        std::ostream* os = &std::cout;
        std::ofstream file;
        if (!cfg.out_path.empty()) {
          file.open(cfg.out_path);
          os = &file;
        }
        for (const avoidsucc::Action& a : st.action_log)
          (*os) << json{{"stage", a.stage}, {"e", a.e}, {"n", a.n}, {"m", a.m}}.dump() << "\n";
        (*os) << json{{"schema", 1},
                      {"stages", st.stages},
                      {"placed", st.placed.size()},
                      {"actions", st.action_log.size()},
                      {"aborted", st.aborted},
                      {"diagnostic", st.diagnostic}}
                     .dump()
              << "\n";
      } else if (*l5_star) {
        avoidsucc::StarReport r = avoidsucc::star_check(
            st, window_for("lemma5", nmax), emax, nmax, std::min(cfg.stages, cfg.step_budget),
            machine);
        emit(cfg, json{{"schema", 1},
                       {"emax", emax},
                       {"nmax", nmax},
                       {"clean", r.clean},
                       {"violations", r.violations},
                       {"skipped", r.skipped},
                       {"diverged", r.diverged},
                       {"ok", r.ok()}});
      } else if (*l5_between) {
        auto shared = std::make_shared<pcf::Machine>(std::move(machine));
        Horizon h = cfg.horizon();
        Nat window = std::min<Nat>(cfg.window_bound, 60);
        h.window_bound = window;
        power::PowerContext ctx = power::make_context(avoidsucc::as_order(st),
                                                      window_for("lemma5", window), h, shared);
        power::PowerElement phi = harness::parse_element(ctx, phi_spec);
        power::PowerElement psi = avoidsucc::between_psi(ctx, st, phi);
        emit(cfg, json{{"schema", 1},
                       {"phi", phi_spec},
                       {"psi", psi.display},
                       {"id_below_psi", verdict_json(power::less_c(ctx, power::id_element(ctx), psi))},
                       {"psi_below_phi", verdict_json(power::less_c(ctx, psi, phi))}});
      }
    } else if (*exp) {
      std::vector<std::string> names =
          exp_name == "all" ? harness::experiment_names() : std::vector<std::string>{exp_name};
      json out = json::array();
      for (const std::string& name : names) out.push_back(harness::run_experiment(name, cfg).to_json());
      emit(cfg, out.size() == 1 ? out[0] : json{{"schema", 1}, {"experiments", out}});
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
