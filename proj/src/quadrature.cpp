#include "hfbm/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace hfbm {

void QuadratureConfig::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_subdivisions < 1)
    throw DomainError("QuadratureConfig: tolerances must be positive and max_subdivisions >= 1");
}

namespace quad_detail {

const Gk21Table& gk21_table() {
  static const Gk21Table table = [] {
    Gk21Table t{};
    const auto& x = boost::math::quadrature::gauss_kronrod<double, 21>::abscissa();
    const auto& wk = boost::math::quadrature::gauss_kronrod<double, 21>::weights();
    const auto& wg = boost::math::quadrature::gauss<double, 10>::weights();
    for (int i = 0; i < 11; ++i) {
      t.x[i] = x[i];
      t.wk[i] = wk[i];
    }
    for (int i = 0; i < 5; ++i) t.wg[i] = wg[i];
    return t;
  }();
  return table;
}

}  // namespace quad_detail
}  // namespace hfbm
