#include "qengine/linalg.hpp"

#include <cmath>

namespace qengine {

CVector vec(const ComplexMatrix& m)
{
    CVector v(m.rows() * m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j)
        for (std::size_t i = 0; i < m.rows(); ++i)
            v[i + m.rows() * j] = m(i, j);
    return v;
}

ComplexMatrix unvec(const CVector& v, std::size_t d)
{
    if (v.size() != d * d)
        throw InvalidArgument("unvec: length is not d*d");
    ComplexMatrix m(d, d);
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < d; ++i)
            m(i, j) = v[i + d * j];
    return m;
}

} // namespace qengine
