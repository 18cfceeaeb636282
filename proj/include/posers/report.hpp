#pragma once

#include <ostream>
#include <string_view>
#include <vector>

#include "posers/attack.hpp"
#include "posers/auth.hpp"
#include "posers/core.hpp"
#include "posers/ingest.hpp"
#include "posers/math.hpp"
#include "posers/registry.hpp"

// Report rendering. `kv` is line-oriented key=value text with a fixed key
// set; `text` is for people. Positions are printed 1-based.
namespace posers::report {

enum class Format { text, kv };

std::string_view to_string(auth::ScVerdict v);
std::string_view to_string(auth::SvStatus s);
std::string_view to_string(auth::Verdict v);
std::string_view to_string(attack::PositionCall c);

void render_stats(std::ostream& out, const DesignParams& params, const math::DesignStats& stats, Format format);
void render_rules(std::ostream& out, const Design& design, Format format);
void render_filter(std::ostream& out, const ingest::FilterReport& filter, Format format);
void render_duplication(std::ostream& out, const ingest::DuplicationProfile& profile, Format format);
void render_auth(std::ostream& out, const auth::AuthReport& report, Format format);
void render_prediction(std::ostream& out, const attack::PredictedDesign& predicted, Format format);
void render_assessment(std::ostream& out, const attack::PredictionAssessment& assessment, Format format);
void render_enumeration(std::ostream& out, const std::vector<attack::RestrictionCandidate>& candidates,
                        Format format);
void render_registry(std::ostream& out, const std::vector<registry::RegistryEntry>& entries, Format format);

}  // namespace posers::report
