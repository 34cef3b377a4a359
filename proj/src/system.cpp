#include "statlin/system.hpp"

namespace statlin {

ControlAffineSystem::ControlAffineSystem(std::vector<PolyVectorField> drift_fields, PolyMatrixMap g)
    : fields(std::move(drift_fields)), diffusion(std::move(g)) {
  if (fields.empty()) throw std::invalid_argument("system needs at least the uncontrolled drift");
  n = fields.front().dim();
  m_u = static_cast<int>(fields.size()) - 1;
  for (const PolyVectorField& f : fields) {
    if (f.dim() != n) throw std::invalid_argument("all drift fields must share the state dimension");
  }
  if (diffusion.rows() == 0 && diffusion.cols() == 0) {
    diffusion = PolyMatrixMap(n, 0, n);
  }
  if (diffusion.rows() != n) throw std::invalid_argument("diffusion must have n rows");
  if (diffusion.num_vars() != n) throw std::invalid_argument("diffusion entries must live in n variables");
  d = diffusion.cols();
}

}  // namespace statlin
