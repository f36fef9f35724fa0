#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hfbm/analysis.hpp"

namespace hfbm::suites {

// holder, variation, memory, lnd, boundary, sonine, inversion, operators, inequality, all
const std::vector<std::string>& names();

bool known(const std::string& suite);

// Throws DomainError when an α is outside the suite's domain.
void check_alphas(const std::string& suite, const std::vector<double>& alphas);

// Empty `alphas` selects the suite's default orders. `all` always uses the defaults.
std::vector<analysis::AnalysisReport> run(const std::string& suite, const std::vector<double>& alphas,
                                          std::uint64_t seed);

// Individual reports shared with the test programs.
analysis::AnalysisReport sonine_report(double alpha);
analysis::AnalysisReport inversion_report(double alpha, std::size_t paths, std::uint64_t seed);
analysis::AnalysisReport rkhs_report(double alpha, const std::string& function);
analysis::AnalysisReport roundtrip_report(double beta);
analysis::AnalysisReport isometry_report(double alpha, std::size_t pairs, std::uint64_t seed);
analysis::AnalysisReport modulus_report(double beta);

}  // namespace hfbm::suites
