#pragma once

// JSON encodings of forms, certificates, rings and reports. Multi-indices and
// basis indices are 0-based. Malformed input raises ParseError with the path
// of the offending field.

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "hodge/exterior.hpp"
#include "hodge/graded_algebra.hpp"
#include "hodge/ineqlab.hpp"
#include "hodge/lefschetz.hpp"
#include "hodge/ring.hpp"

namespace hodge::io {

using Json = nlohmann::ordered_json;

Json to_json(Complex c);
Complex complex_from_json(const Json& j, const std::string& path);

/// { "n", "p", "q", "coeffs": [ {"I", "J", "re", "im"} ] }, zero coefficients omitted.
Json to_json(const Form& f);
Form form_from_json(const Json& j, ContextPtr ctx = {});

/// Form encoding of omega plus its "hermitian" matrix as rows of [re, im] pairs.
Json to_json(const PositiveForm& w);
/// Accepts a (1,1) form encoding or { "n", "hermitian" }.
PositiveForm positive_form_from_json(const Json& j, ContextPtr ctx = {});

Json to_json(const CertificateEntry& e);
Json to_json(const Certificate& c);

Json to_json(const GradedRing& ring);
RingPtr ring_from_json(const Json& j);
/// { "terms": [ {"k" or "name", "re", "im"} ] }
Json to_json(const RingElement& a);
RingElement ring_element_from_json(const Json& j, const RingPtr& ring);

Json to_json(const RingDiagnostics& d);
Json to_json(const ContainmentReport& r);
Json to_json(const TopChernReport& r);
Json to_json(const PointwiseReport& r);
Json to_json(const RescalingReport& r);

Json to_json(const SweepConfig& c);
Json to_json(const SweepRecord& r, SweepKind kind);
Json to_json(const SweepReport& r);

Json read_json_file(const std::filesystem::path& path);
/// Pretty-printed with a trailing newline.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string dump(const Json& j);

}  // namespace hodge::io
