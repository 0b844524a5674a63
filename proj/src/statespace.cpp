#include "statespace.hpp"

#include <string>

#include "errors.hpp"

namespace idob {

StateSpaceBlock::StateSpaceBlock(Mat a, Mat b, Mat c, Mat d)
    : A(std::move(a)), B(std::move(b)), C(std::move(c)), D(std::move(d)) {
    validate();
    state = Vec::Zero(A.rows());
}

void StateSpaceBlock::validate(const char* what) const {
    auto fail = [&](const std::string& m) {
        throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": " + m);
    };
    if (A.rows() != A.cols()) fail("A not square");
    if (B.rows() != A.rows()) fail("B rows != n");
    if (C.cols() != A.rows()) fail("C cols != n");
    if (D.rows() != C.rows() || D.cols() != B.cols()) fail("D not q x p");
}

double StateSpaceBlock::output(double u) const {
    return (C * state)(0) + D(0, 0) * u;
}

void StateSpaceBlock::advance(double u) {
    state = A * state + B.col(0) * u;
}

StateSpaceBlock scalar_block(double a, double b, double c, double d) {
    Mat A(1, 1), B(1, 1), C(1, 1), D(1, 1);
    A << a;
    B << b;
    C << c;
    D << d;
    return {A, B, C, D};
}

}  // namespace idob
