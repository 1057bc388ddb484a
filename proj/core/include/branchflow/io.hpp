#pragma once

#include <string>

#include <json.hpp>

#include "branchflow/blowup.hpp"
#include "branchflow/embedding.hpp"
#include "branchflow/moduli.hpp"

namespace branchflow {
namespace io {

using json = nlohmann::json;

// Input schemas. Scalar coefficients are strings in the documented grammar,
// read in the configured cyclotomic field Q(zeta_L).
PuiseuxParam parse_param(const json& j, long L);
VectorField parse_field(const json& j, long L);
JetDiffeo parse_jet(const json& j, long L);
NormalFormReport parse_normal_form(const json& j, long L);

json param_json(const PuiseuxParam& p);
json series_json(const TSeries& s);
json bipoly_json(const BiPoly& p);
json field_json(const VectorField& X);
json one_form_json(const OneForm& w);
json jet_json(const JetDiffeo& d);
json ord_json(const Ord& o);
json semigroup_json(const SemigroupData& s);
json shared_path_json(const SharedPath& path);
json deformed_json(const DeformedParam& d);
json normal_form_json(const NormalFormReport& r, bool numeric_scalars = false);
json stabilizer_json(const StabilizerJet2& s);
json resonance_json(const ResonanceCertificate& c);
json completeness_json(const CompletenessCertificate& c);

std::string scalar_numeric(const Scalar& s);

// Canonical serialization: sorted keys, 2-space indent, trailing newline.
std::string dump_canonical(const json& j);
void write_atomic(const std::string& path, const std::string& content);

}  // namespace io
}  // namespace branchflow
