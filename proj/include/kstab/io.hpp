#pragma once

#include "kstab/counterexample.hpp"
#include "kstab/kernels.hpp"
#include "kstab/norms.hpp"
#include "kstab/op.hpp"
#include "kstab/verification.hpp"

#include <json.hpp>

#include <memory>
#include <string>

namespace kstab {

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Plain-text key-value formats with exact "p/q" rationals. Round trips are
/// bit-exact: save(load(s)) == s for canonical input.
std::string save_matrix(const SymMatrix& m);
SymMatrix load_matrix(const std::string& text);

std::string save_kernel(const Kernel& k);  // throws for unbounded lazy kernels
std::unique_ptr<Kernel> load_kernel(const std::string& text);

/// "2,1;1,2" rows-of-entries shorthand for CLI use.
SymMatrix parse_inline_matrix(const std::string& text);

std::string save_input(const BoundedInput& u);
BoundedInput load_input(const std::string& text);

nlohmann::json norm_report_json(const NormReport& r);
nlohmann::json verdict_json(const VerdictRecord& v);
nlohmann::json counterexample_spec_json(const CounterexampleSpec& spec);

std::string series_csv(const SeriesEvidence& ev);
std::string operator_output_csv(const OperatorOutput& out);
std::string gram_csv(const GramSample& s);

}  // namespace kstab
