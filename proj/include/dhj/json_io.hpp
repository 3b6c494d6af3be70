#pragma once

#include <json.hpp>

#include "dhj/extremal.hpp"
#include "dhj/insensitive.hpp"
#include "dhj/measures.hpp"
#include "dhj/subspaces.hpp"
#include "dhj/words.hpp"

namespace dhj {

using Json = nlohmann::ordered_json;

Json word_to_json(const Word& x);

// Explicit sets: {n, k, ranks:[sorted]}; slice-symmetric band sets:
// {n, k, band:{letter, lo, hi}}.
Json wordset_to_json(const WordSet& A);
WordSet wordset_from_json(const Json& j);

Json template_to_json(const SubspaceTemplate& t);
SubspaceTemplate template_from_json(const Json& j);

// {n, k, backend, entries:[{slice|rank, weight:"p/q"}]} with zero weights
// omitted.
Json density_to_json(const Density& d);

Json heart_to_json(const HeartOutcome& h);
Json extremal_to_json(const ExtremalResult& r);

Json certificate_to_json(const PartitionCertificate& c);
PartitionCertificate certificate_from_json(const Json& j);

Json lym_to_json(const LymResult& r);
Json average_check_to_json(const AverageCheck& r);
Json first_step_to_json(const FirstStepReport& r);
Json third_step_to_json(const ThirdStepResult& r);
Json line_density_to_json(const LineDensityReport& r);
Json degenerate_bounds_to_json(const DegenerateSliceBounds& r);
Json subspace_to_json(const Subspace& s);

}  // namespace dhj
