#include <stdexcept>

#include "steklov/verification.hpp"

namespace steklov {

const DiskReference& disk_reference() {
  static const DiskReference ref{
      {5.151841, 0.223578, 0.223578, -1.269100, -1.269100, -2.472703},
      {cplx(-0.320506, 3.121689), cplx(-0.136861, 1.396737), cplx(-0.136861, 1.396737),
       cplx(-1.353076, 0.791723)},
  };
  return ref;
}

const PolygonReference& polygon_reference() {
  static const PolygonReference ref{
      {2.533214, 0.8578171, 0.1245245, -1.085295, -1.091190, -1.416890},
      {1.484713, 0.4619870, -0.1841751, -0.6900738, -1.899866, -1.928669},
      {cplx(0.5142952, 2.882321), cplx(0.3970387, 1.458977), cplx(-0.0771773, 1.042675),
       cplx(-1.440507, 0.8046939), cplx(-1.657333, 0.7665137), cplx(-2.517687, 0.5715481)},
      {cplx(0.9193065, 1.770786), cplx(0.2926298, 0.9998754), cplx(-0.2626135, 0.7574491),
       cplx(-0.7420933, 0.6087749), cplx(-2.619376, 0.5626407), cplx(-2.849534, 0.4931528)},
  };
  return ref;
}

const std::array<cplx, 6>& PolygonReference::column(DomainKind kind, bool complex_n) const {
  switch (kind) {
    case DomainKind::LShape: return complex_n ? lshape_complex : lshape_real;
    case DomainKind::SlitSquare: return complex_n ? slit_complex : slit_real;
    default: break;
  }
  throw std::invalid_argument("polygon_reference: only the L-shape and the slit square are tabulated");
}

}  // namespace steklov
