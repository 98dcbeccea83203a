#pragma once

#include "jetform/documents.hpp"

#include <string>
#include <vector>

namespace jetform {

/// One verification step of a corpus case.
struct CheckResult {
    std::string name;
    bool pass = false;
    double millis = 0.0;
    std::string residual;  // offending expression or note on failure
};

struct Report {
    std::string case_name;
    std::vector<CheckResult> checks;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    double total_millis() const {
        double t = 0;
        for (const auto& c : checks) t += c.millis;
        return t;
    }
    std::string text() const;
    json to_json() const;
};

/// Bundled regression corpus: the worked hierarchies (sine-Gordon/mKdV,
/// AKNS three- and four-flow, KP) plus the zero-symmetry demonstration.
/// Inputs are stored as documents so failures point at a specific source
/// expression.
class CorpusCase {
  public:
    std::string name;
    std::map<std::string, json> documents;

    json doc(const std::string& key) const;
};

const std::vector<std::string>& corpus_case_names();
const CorpusCase& corpus_case(const std::string& name);

/// Executes every check of the named case.
Report corpus_run(const std::string& name);

} // namespace jetform
