#include "dhj/json_io.hpp"

#include <stdexcept>

namespace dhj {

namespace {

std::string rat_str(const Rat& r) { return rat_to_string(r); }

}  // namespace

Json word_to_json(const Word& x) {
  Json j;
  j["k"] = x.k;
  j["letters"] = x.letters;
  if (x.k <= 9) j["text"] = word_to_string(x);
  return j;
}

Json wordset_to_json(const WordSet& A) {
  Json j;
  j["n"] = A.n();
  j["k"] = A.k();
  if (A.is_explicit()) {
    j["ranks"] = A.ranks();
  } else if (A.band()) {
    j["band"] = {{"letter", A.band()->letter}, {"lo", A.band()->lo}, {"hi", A.band()->hi}};
  } else {
    throw std::invalid_argument("only explicit and band sets serialize");
  }
  return j;
}

WordSet wordset_from_json(const Json& j) {
  int n = j.at("n").get<int>();
  int k = j.at("k").get<int>();
  if (j.contains("ranks"))
    return WordSet::from_ranks(n, k, j.at("ranks").get<std::vector<Rank>>());
  if (j.contains("band")) {
    const Json& b = j.at("band");
    return WordSet::from_band(
        n, k, Band{b.at("letter").get<int>(), b.at("lo").get<long>(), b.at("hi").get<long>()});
  }
  throw std::invalid_argument("word set JSON needs ranks or band");
}

Json template_to_json(const SubspaceTemplate& t) {
  Json j;
  j["n"] = t.n();
  j["k"] = t.k;
  j["d"] = t.d;
  j["letters"] = t.letters;
  if (t.k + t.d <= 9) j["text"] = template_to_string(t);
  return j;
}

SubspaceTemplate template_from_json(const Json& j) {
  return SubspaceTemplate(j.at("k").get<int>(), j.at("d").get<int>(),
                          j.at("letters").get<std::vector<int>>());
}

Json density_to_json(const Density& d) {
  Json j;
  j["n"] = d.n();
  j["k"] = d.k();
  Json entries = Json::array();
  if (d.backend() == Density::Backend::slice_table) {
    j["backend"] = "slice";
    const auto& slices = d.slices();
    const auto& w = d.slice_weights();
    for (size_t i = 0; i < slices.size(); ++i) {
      if (w[i] == 0) continue;
      entries.push_back({{"slice", slices[i].counts}, {"weight", rat_str(w[i])}});
    }
  } else {
    j["backend"] = "point";
    const auto& w = d.point_weights();
    for (size_t r = 0; r < w.size(); ++r) {
      if (w[r] == 0) continue;
      entries.push_back({{"rank", r}, {"weight", rat_str(w[r])}});
    }
  }
  j["entries"] = std::move(entries);
  return j;
}

Json heart_to_json(const HeartOutcome& h) {
  Json j;
  Json clist = Json::array();
  for (const WordSet& c : h.C_list) clist.push_back(c.ranks());
  j["C_list"] = std::move(clist);
  j["C"] = h.C.ranks();
  Json parts = Json::array();
  for (const WordSet& p : h.parts) parts.push_back(p.ranks());
  j["partition"] = std::move(parts);
  j["chosen_j"] = h.chosen_j;
  j["D"] = h.D.ranks();
  Json witness = Json::array();
  for (const auto& [set, w] : h.witness)
    witness.push_back({{"i", w.i}, {"ranks", set.ranks()}});
  j["witness"] = std::move(witness);
  j["ledger"] = {{"nu_A1", rat_str(h.ledger.nu_A1)},
                 {"nu_A1_cap_C", rat_str(h.ledger.nu_A1_cap_C)},
                 {"nu_C_with_last_letter", rat_str(h.ledger.nu_C_with_last_letter)},
                 {"nu_A1_cap_D", rat_str(h.ledger.nu_A1_cap_D)},
                 {"nu_D", rat_str(h.ledger.nu_D)},
                 {"slack", rat_str(h.ledger.slack)}};
  Json violations = Json::array();
  for (const auto& v : h.violations)
    violations.push_back({{"word", word_to_json(v.x)}, {"line", template_to_json(v.line)}});
  j["violations"] = std::move(violations);
  return j;
}

Json extremal_to_json(const ExtremalResult& r) {
  Json j;
  j["n"] = r.n;
  j["k"] = r.k;
  j["best_size"] = r.best_size;
  j["witness"] = r.witness.ranks();
  j["optimal"] = r.optimal;
  j["nodes_explored"] = r.nodes_explored;
  return j;
}

Json certificate_to_json(const PartitionCertificate& c) {
  Json j;
  j["n"] = c.target.n();
  j["k"] = c.target.k();
  Json blocks = Json::array();
  for (const SubspaceTemplate& t : c.blocks) blocks.push_back(template_to_json(t));
  j["blocks"] = std::move(blocks);
  j["residual"] = c.residual.ranks();
  j["target"] = c.target.ranks();
  j["residual_density"] = rat_str(c.residual_density);
  j["requested_eps"] = rat_str(c.requested_eps);
  j["eps_met"] = c.eps_met;
  j["rounds"] = c.rounds;
  Json log = Json::array();
  for (const PartitionRound& r : c.round_log)
    log.push_back({{"free_coords", r.free_coords_used},
                   {"block_shape", template_to_json(r.block_shape)},
                   {"sections_removed", r.sections_removed},
                   {"removed_mass", rat_str(r.removed_mass)},
                   {"round_bound", rat_str(r.round_bound)},
                   {"met_bound", r.met_bound}});
  j["round_log"] = std::move(log);
  return j;
}

PartitionCertificate certificate_from_json(const Json& j) {
  PartitionCertificate c;
  int n = j.at("n").get<int>();
  int k = j.at("k").get<int>();
  for (const Json& b : j.at("blocks")) c.blocks.push_back(template_from_json(b));
  c.residual = WordSet::from_ranks(n, k, j.at("residual").get<std::vector<Rank>>());
  c.target = WordSet::from_ranks(n, k, j.at("target").get<std::vector<Rank>>());
  c.residual_density = rat_from_string(j.at("residual_density").get<std::string>());
  c.requested_eps = rat_from_string(j.at("requested_eps").get<std::string>());
  c.eps_met = j.at("eps_met").get<bool>();
  c.rounds = j.at("rounds").get<int>();
  return c;
}

Json lym_to_json(const LymResult& r) {
  return Json{{"sum", rat_str(r.sum)}, {"antichain", r.antichain}};
}

Json average_check_to_json(const AverageCheck& r) {
  return Json{{"direct_full", rat_str(r.direct_full)},
              {"composed_full", rat_str(r.composed_full)},
              {"direct_truncated", rat_str(r.direct_truncated)},
              {"composed_truncated", rat_str(r.composed_truncated)},
              {"mu", rat_str(r.mu)},
              {"equal", r.equal()}};
}

Json subspace_to_json(const Subspace& s) {
  Json j;
  j["template"] = template_to_json(s.tmpl);
  j["free_coords"] = s.free_coords;
  Json fixed = Json::object();
  for (int i = 0; i < s.n(); ++i)
    if (s.fixed_letters[static_cast<size_t>(i)] != 0)
      fixed[std::to_string(i + 1)] = s.fixed_letters[static_cast<size_t>(i)];
  j["fixed"] = std::move(fixed);
  return j;
}

Json first_step_to_json(const FirstStepReport& r) {
  Json j;
  j["total"] = r.total;
  j["alt1"] = r.alt1;
  j["alt2"] = r.alt2;
  j["neither"] = r.neither;
  if (r.alt1_witness) j["alt1_witness"] = subspace_to_json(*r.alt1_witness);
  if (r.alt2_witness) j["alt2_witness"] = subspace_to_json(*r.alt2_witness);
  if (r.neither_witness) j["neither_witness"] = subspace_to_json(*r.neither_witness);
  return j;
}

Json third_step_to_json(const ThirdStepResult& r) {
  return Json{{"maximizer", subspace_to_json(r.maximizer)},
              {"slack", rat_str(r.slack)},
              {"mu_A2", rat_str(r.mu_A2)},
              {"mu_D", rat_str(r.mu_D)}};
}

Json line_density_to_json(const LineDensityReport& r) {
  return Json{{"mu_A", rat_str(r.mu_A)},
              {"nu_A", rat_str(r.nu_A)},
              {"nu_tilde_A", rat_str(r.nu_tilde_A)},
              {"mu_M", rat_str(r.mu_M)},
              {"nu_M", rat_str(r.nu_M)}};
}

Json degenerate_bounds_to_json(const DegenerateSliceBounds& r) {
  return Json{{"low_occurrence_mass", rat_str(r.low_occurrence_mass)},
              {"low_occurrence_bound", rat_str(r.low_occurrence_bound)},
              {"degenerate_mass", rat_str(r.degenerate_mass)},
              {"degenerate_bound", rat_str(r.degenerate_bound)},
              {"sup_distance", rat_str(r.sup_distance)},
              {"sup_bound", rat_str(r.sup_bound)},
              {"all_strict", r.all_strict()}};
}

}  // namespace dhj
