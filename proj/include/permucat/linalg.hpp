#pragma once

#include <vector>

#include <gmpxx.h>

namespace permucat {

using QMatrix = std::vector<std::vector<mpq_class>>;

// exact rank over the rationals; the argument is consumed
int rank_q(QMatrix m);
// inverse of a square rational matrix; throws if singular
QMatrix inverse_q(const QMatrix& m);
QMatrix multiply_q(const QMatrix& a, const QMatrix& b);
QMatrix identity_q(int n);
mpq_class det_q(QMatrix m);

}  // namespace permucat
