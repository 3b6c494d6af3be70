#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>

#include "dhj/extremal.hpp"
#include "dhj/insensitive.hpp"
#include "dhj/measures.hpp"
#include "dhj/subspaces.hpp"
#include "dhj/words.hpp"

namespace py = pybind11;
using namespace dhj;

namespace {

py::object to_fraction(const Rat& r) {
  static py::object Fraction = py::module_::import("fractions").attr("Fraction");
  return Fraction(rat_to_string(r));
}

Rat from_py_rational(const py::object& obj) {
  return rat_from_string(py::str(obj).cast<std::string>());
}

Word make_word(int k, const std::vector<int>& letters) { return Word(k, letters); }

DensityKind parse_kind(const std::string& kind) {
  if (kind == "uniform") return DensityKind::uniform;
  if (kind == "equal_slices") return DensityKind::equal_slices;
  if (kind == "nondeg_equal_slices") return DensityKind::nondeg_equal_slices;
  throw std::invalid_argument("unknown density kind: " + kind);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "exact combinatorics of words, lines, subspaces and equal-slices densities";

  py::class_<Word>(m, "Word")
      .def(py::init(&make_word), py::arg("k"), py::arg("letters"))
      .def_readonly("k", &Word::k)
      .def_property_readonly("letters", [](const Word& w) { return w.letters; })
      .def_property_readonly("n", &Word::n)
      .def("__eq__", [](const Word& a, const Word& b) { return a == b; })
      .def("__repr__", [](const Word& w) {
        return "Word(k=" + std::to_string(w.k) + ", '" +
               (w.k <= 9 ? word_to_string(w) : "...") + "')";
      });

  py::class_<SliceVector>(m, "SliceVector")
      .def(py::init<std::vector<int>>(), py::arg("counts"))
      .def_property_readonly("counts", [](const SliceVector& s) { return s.counts; })
      .def_property_readonly("degenerate", &SliceVector::degenerate)
      .def("__eq__", [](const SliceVector& a, const SliceVector& b) { return a == b; });

  py::class_<Band>(m, "Band")
      .def(py::init([](int letter, long lo, long hi) { return Band{letter, lo, hi}; }),
           py::arg("letter"), py::arg("lo"), py::arg("hi"));

  py::class_<WordSet>(m, "WordSet")
      .def_static("empty", &WordSet::empty_set, py::arg("n"), py::arg("k"))
      .def_static("full", &WordSet::full_set, py::arg("n"), py::arg("k"))
      .def_static("from_ranks", &WordSet::from_ranks, py::arg("n"), py::arg("k"),
                  py::arg("ranks"))
      .def_static("from_words", &WordSet::from_words, py::arg("n"), py::arg("k"),
                  py::arg("words"))
      .def_static("band", &WordSet::from_band, py::arg("n"), py::arg("k"), py::arg("band"))
      .def_property_readonly("n", &WordSet::n)
      .def_property_readonly("k", &WordSet::k)
      .def_property_readonly("is_explicit", &WordSet::is_explicit)
      .def("ranks", &WordSet::ranks)
      .def("size", [](const WordSet& s) { return py::int_(py::str(s.size().get_str())); })
      .def("contains", [](const WordSet& s, const Word& w) { return s.contains(w); })
      .def("materialize", &WordSet::materialize)
      .def("complement", &WordSet::complement)
      .def("intersect", &WordSet::intersect)
      .def("unite", &WordSet::unite)
      .def("subtract", &WordSet::subtract)
      .def("is_subset_of", &WordSet::is_subset_of)
      .def("__eq__", [](const WordSet& a, const WordSet& b) { return a == b; });

  m.def("encode_rank", &encode_rank, py::arg("word"));
  m.def("decode_rank", &decode_rank, py::arg("n"), py::arg("k"), py::arg("rank"));
  m.def("szemeredi_map", &szemeredi_map, py::arg("word"));
  m.def("slice_of", &slice_of, py::arg("word"));
  m.def("orbit_size",
        [](const SliceVector& s) { return py::int_(py::str(orbit_size(s).get_str())); });
  m.def(
      "enumerate_slices",
      [](int n, int k, bool nondegenerate_only) {
        return enumerate_slices(n, k, nondegenerate_only);
      },
      py::arg("n"), py::arg("k"), py::arg("nondegenerate_only") = false);

  py::class_<SubspaceTemplate>(m, "SubspaceTemplate")
      .def(py::init<int, int, std::vector<int>>(), py::arg("k"), py::arg("d"),
           py::arg("letters"))
      .def_readonly("k", &SubspaceTemplate::k)
      .def_readonly("d", &SubspaceTemplate::d)
      .def_property_readonly("letters",
                             [](const SubspaceTemplate& t) { return t.letters; })
      .def_property_readonly("n", &SubspaceTemplate::n)
      .def("canonical", &SubspaceTemplate::canonical)
      .def("__eq__",
           [](const SubspaceTemplate& a, const SubspaceTemplate& b) { return a == b; })
      .def("__repr__", [](const SubspaceTemplate& t) {
        return "SubspaceTemplate(k=" + std::to_string(t.k) + ", d=" + std::to_string(t.d) +
               ", '" + (t.k + t.d <= 9 ? template_to_string(t) : "...") + "')";
      });

  py::class_<Subspace>(m, "Subspace")
      .def_static("from_template", &Subspace::from_template)
      .def_static("axis", &Subspace::axis, py::arg("n"), py::arg("k"), py::arg("free"),
                  py::arg("rest"))
      .def_readonly("template_", &Subspace::tmpl)
      .def_readonly("free_coords", &Subspace::free_coords);

  m.def("instantiate", &instantiate, py::arg("template_"), py::arg("y"));
  m.def("subspace_points", &subspace_points, py::arg("template_"));
  m.def("subspace_count",
        [](int n, int k, int d) { return py::int_(py::str(subspace_count(n, k, d).get_str())); });
  m.def("enumerate_subspaces", &enumerate_subspaces, py::arg("n"), py::arg("k"), py::arg("d"));
  m.def("compose", &compose, py::arg("y"), py::arg("z"));
  m.def("truncation", &truncation, py::arg("subspace"));
  m.def("pullback", &pullback, py::arg("subspace"), py::arg("A"));

  py::class_<Density>(m, "Density")
      .def_property_readonly("n", &Density::n)
      .def_property_readonly("k", &Density::k)
      .def("weight", [](const Density& d, const Word& w) { return to_fraction(d.weight(w)); })
      .def("total_mass", [](const Density& d) { return to_fraction(d.total_mass()); });

  m.def(
      "make_density",
      [](const std::string& kind, int n, int k) { return make_density(parse_kind(kind), n, k); },
      py::arg("kind"), py::arg("n"), py::arg("k"));
  m.def("measure",
        [](const Density& d, const WordSet& A) { return to_fraction(measure(d, A)); });
  m.def("tv_distance",
        [](const Density& a, const Density& b) { return to_fraction(tv_distance(a, b)); });
  m.def(
      "compose_subset_density",
      [](int n, int k, int mm, const std::string& minor, const std::string& major) {
        MinorKind mi = minor == "restricted_uniform" ? MinorKind::restricted_uniform
                       : minor == "uniform"          ? MinorKind::uniform
                                                     : MinorKind::equal_slices;
        MajorKind ma = major == "uniform" ? MajorKind::uniform : MajorKind::equal_slices;
        return compose_subset_density(n, k, mm, mi, ma);
      },
      py::arg("n"), py::arg("k"), py::arg("m"), py::arg("minor"), py::arg("major"));
  m.def("compose_injection_density", &compose_injection_density, py::arg("n"), py::arg("k"),
        py::arg("m"), py::arg("minor"), py::arg("exploit_symmetry") = true);
  m.def(
      "nu_prime_density",
      [](int n, int k, int d, const std::string& weights, const std::string& method) {
        return nu_prime_density(
            n, k, d,
            weights == "plain" ? NuPrimeWeights::plain : NuPrimeWeights::nondegenerate,
            method == "brute" ? NuPrimeMethod::brute_force : NuPrimeMethod::grouped);
      },
      py::arg("n"), py::arg("k"), py::arg("d"), py::arg("weights") = "nondegenerate",
      py::arg("method") = "grouped");
  m.def("circle_density", &circle_density, py::arg("n"), py::arg("k"), py::arg("max_n") = 8);
  m.def(
      "restrict_equal_slices",
      [](const WordSet& A, const Subspace& s, bool truncated) {
        return to_fraction(restrict_equal_slices(A, s, truncated));
      },
      py::arg("A"), py::arg("subspace"), py::arg("truncated") = false);
  m.def(
      "slice_moments",
      [](const Density& d, const std::function<py::object(const SliceVector&)>& f) {
        Moments mo = slice_moments(d, [&](const SliceVector& s) -> Rat {
          return from_py_rational(f(s));
        });
        return py::make_tuple(to_fraction(mo.mean), to_fraction(mo.variance));
      },
      py::arg("density"), py::arg("f"));
  m.def(
      "balanced_tail",
      [](int n, int k, int j, long halfwidth) {
        return to_fraction(balanced_tail(n, k, j, halfwidth));
      },
      py::arg("n"), py::arg("k"), py::arg("j"), py::arg("halfwidth"));
  m.def(
      "degenerate_slice_bounds",
      [](int n, int k, int mm, int j) {
        DegenerateSliceBounds b = degenerate_slice_bounds(n, k, mm, j);
        py::dict out;
        out["low_occurrence_mass"] = to_fraction(b.low_occurrence_mass);
        out["low_occurrence_bound"] = to_fraction(b.low_occurrence_bound);
        out["degenerate_mass"] = to_fraction(b.degenerate_mass);
        out["degenerate_bound"] = to_fraction(b.degenerate_bound);
        out["sup_distance"] = to_fraction(b.sup_distance);
        out["sup_bound"] = to_fraction(b.sup_bound);
        out["all_strict"] = b.all_strict();
        return out;
      },
      py::arg("n"), py::arg("k"), py::arg("m"), py::arg("j"));

  py::class_<InsensitiveWitness>(m, "InsensitiveWitness")
      .def(py::init([](int i) { return InsensitiveWitness{i}; }), py::arg("i"))
      .def_readonly("i", &InsensitiveWitness::i);

  m.def(
      "is_insensitive",
      [](const WordSet& A, int i) { return is_insensitive(A, InsensitiveWitness{i}); },
      py::arg("A"), py::arg("i"));
  m.def(
      "closure", [](const WordSet& A, int i) { return closure(A, InsensitiveWitness{i}); },
      py::arg("A"), py::arg("i"));
  m.def(
      "is_k_set",
      [](const WordSet& D, const std::vector<std::pair<WordSet, int>>& parts) {
        std::vector<std::pair<WordSet, InsensitiveWitness>> ps;
        for (const auto& [set, i] : parts) ps.emplace_back(set, InsensitiveWitness{i});
        return is_k_set(D, ps);
      },
      py::arg("D"), py::arg("parts"));
  m.def(
      "insensitive_in_subspace",
      [](const WordSet& Dsub, const Subspace& s, int i) {
        return insensitive_in_subspace(Dsub, s, InsensitiveWitness{i});
      },
      py::arg("Dsub"), py::arg("subspace"), py::arg("i"));

  py::class_<HeartOutcome>(m, "HeartOutcome")
      .def_readonly("C_list", &HeartOutcome::C_list)
      .def_readonly("C", &HeartOutcome::C)
      .def_readonly("parts", &HeartOutcome::parts)
      .def_readonly("chosen_j", &HeartOutcome::chosen_j)
      .def_readonly("D", &HeartOutcome::D)
      .def_property_readonly("ledger",
                             [](const HeartOutcome& h) {
                               py::dict out;
                               out["nu_A1"] = to_fraction(h.ledger.nu_A1);
                               out["nu_A1_cap_C"] = to_fraction(h.ledger.nu_A1_cap_C);
                               out["nu_C_with_last_letter"] =
                                   to_fraction(h.ledger.nu_C_with_last_letter);
                               out["nu_A1_cap_D"] = to_fraction(h.ledger.nu_A1_cap_D);
                               out["nu_D"] = to_fraction(h.ledger.nu_D);
                               out["slack"] = to_fraction(h.ledger.slack);
                               return out;
                             })
      .def_property_readonly("violations", [](const HeartOutcome& h) {
        py::list out;
        for (const auto& v : h.violations) out.append(py::make_tuple(v.x, v.line));
        return out;
      });
  m.def("heart_step", &heart_step, py::arg("A1"));

  py::class_<ExtremalResult>(m, "ExtremalResult")
      .def_readonly("n", &ExtremalResult::n)
      .def_readonly("k", &ExtremalResult::k)
      .def_readonly("best_size", &ExtremalResult::best_size)
      .def_readonly("witness", &ExtremalResult::witness)
      .def_readonly("optimal", &ExtremalResult::optimal)
      .def_readonly("nodes_explored", &ExtremalResult::nodes_explored);

  m.def("lines_in", &lines_in, py::arg("A"));
  m.def("max_line_free", &max_line_free, py::arg("n"), py::arg("k"),
        py::arg("node_budget") = 50'000'000ULL);
  m.def(
      "lym_sum",
      [](const std::vector<std::uint32_t>& family, int n) {
        LymResult r = lym_sum(family, n);
        return py::make_tuple(to_fraction(r.sum), r.antichain);
      },
      py::arg("family"), py::arg("n"));
  m.def("subspace_in_set", &subspace_in_set, py::arg("A"), py::arg("d"));
  m.def(
      "increment_search",
      [](const WordSet& A, int d) {
        auto [s, v] = increment_search(A, d);
        return py::make_tuple(s, to_fraction(v));
      },
      py::arg("A"), py::arg("d"));
  m.def(
      "subspace_average_check",
      [](const WordSet& A, int mm) {
        AverageCheck c = subspace_average_check(A, mm);
        py::dict out;
        out["direct_full"] = to_fraction(c.direct_full);
        out["composed_full"] = to_fraction(c.composed_full);
        out["direct_truncated"] = to_fraction(c.direct_truncated);
        out["composed_truncated"] = to_fraction(c.composed_truncated);
        out["mu"] = to_fraction(c.mu);
        out["equal"] = c.equal();
        return out;
      },
      py::arg("A"), py::arg("m"));
  m.def(
      "first_step_classify",
      [](const WordSet& A, int mm, const py::object& delta, const py::object& eta) {
        FirstStepReport r = first_step_classify(A, mm, from_py_rational(delta),
                                                from_py_rational(eta));
        py::dict out;
        out["total"] = r.total;
        out["alt1"] = r.alt1;
        out["alt2"] = r.alt2;
        out["neither"] = r.neither;
        return out;
      },
      py::arg("A"), py::arg("m"), py::arg("delta"), py::arg("eta"));
  m.def(
      "third_step_search",
      [](const WordSet& A2, const WordSet& D, int rr, const py::object& delta2) {
        ThirdStepResult r = third_step_search(A2, D, rr, from_py_rational(delta2));
        py::dict out;
        out["maximizer"] = r.maximizer;
        out["slack"] = to_fraction(r.slack);
        out["mu_A2"] = to_fraction(r.mu_A2);
        out["mu_D"] = to_fraction(r.mu_D);
        return out;
      },
      py::arg("A2"), py::arg("D"), py::arg("r"), py::arg("delta2"));

  py::class_<PartitionCertificate>(m, "PartitionCertificate")
      .def_readonly("blocks", &PartitionCertificate::blocks)
      .def_readonly("residual", &PartitionCertificate::residual)
      .def_readonly("target", &PartitionCertificate::target)
      .def_property_readonly(
          "residual_density",
          [](const PartitionCertificate& c) { return to_fraction(c.residual_density); })
      .def_readonly("eps_met", &PartitionCertificate::eps_met)
      .def_readonly("rounds", &PartitionCertificate::rounds);
  m.def(
      "partition_insensitive",
      [](const WordSet& D, const std::vector<std::pair<WordSet, int>>& parts, int d, int mm,
         const py::object& eps, std::uint64_t budget) {
        std::vector<std::pair<WordSet, InsensitiveWitness>> ps;
        for (const auto& [set, i] : parts) ps.emplace_back(set, InsensitiveWitness{i});
        return partition_insensitive(D, ps, d, mm, from_py_rational(eps), budget);
      },
      py::arg("D"), py::arg("parts"), py::arg("d"), py::arg("m"), py::arg("eps"),
      py::arg("round_budget") = 1024ULL);
  m.def("validate_certificate", &validate_certificate, py::arg("certificate"));
  m.def(
      "line_density_report",
      [](const WordSet& A) {
        LineDensityReport r = line_density_report(A);
        py::dict out;
        out["mu_A"] = to_fraction(r.mu_A);
        out["nu_A"] = to_fraction(r.nu_A);
        out["nu_tilde_A"] = to_fraction(r.nu_tilde_A);
        out["mu_M"] = to_fraction(r.mu_M);
        out["nu_M"] = to_fraction(r.nu_M);
        return out;
      },
      py::arg("A"));

  m.def("explicit_cap", &explicit_cap);
  m.def("set_explicit_cap", &set_explicit_cap, py::arg("cap"));
}
