// quad.hpp - 50-digit complex arithmetic for the counting-field path and the
// ill-conditioned steady-state / Drazin solves.
#pragma once

#include <boost/multiprecision/cpp_complex.hpp>

#include "qengine/engine.hpp"

namespace qengine {

using qreal = boost::multiprecision::cpp_bin_float_50;
using qcplx = boost::multiprecision::cpp_complex_50;
using QuadMatrix = BasicMatrix<qcplx>;
using QuadPoly = BasicPoly<qcplx>;

// Same generator as liouvillian(), with phases evaluated in extended precision.
QuadMatrix liouvillian_quad(const EngineParams& p, const CountingField& chi);

// Normalized kernel vector of a generator, column-stacked (see steady_numeric).
std::vector<qcplx> steady_vector_quad(const ComplexMatrix& l);

inline cplx to_double(const qcplx& z)
{
    return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

inline QuadMatrix to_quad(const ComplexMatrix& m)
{
    QuadMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            out(i, j) = qcplx(m(i, j).real(), m(i, j).imag());
    return out;
}

inline ComplexMatrix to_double(const QuadMatrix& m)
{
    ComplexMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            out(i, j) = to_double(m(i, j));
    return out;
}

} // namespace qengine
