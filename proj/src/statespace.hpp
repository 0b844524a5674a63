#pragma once

#include <Eigen/Dense>

namespace idob {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Discrete LTI block x(k+1) = A x + B u, y = C x + D u.
struct StateSpaceBlock {
    Mat A, B, C, D;
    Vec state;

    StateSpaceBlock() = default;
    StateSpaceBlock(Mat a, Mat b, Mat c, Mat d);

    int n() const { return static_cast<int>(A.rows()); }
    int inputs() const { return static_cast<int>(B.cols()); }
    int outputs() const { return static_cast<int>(C.rows()); }

    // Throws DimensionMismatch naming `what` when the matrices disagree.
    void validate(const char* what = "block") const;
    void reset() { state = Vec::Zero(A.rows()); }

    // SISO helpers: output for the current state given input u, then advance.
    double output(double u) const;
    void advance(double u);
    double step(double u) {
        double y = output(u);
        advance(u);
        return y;
    }
};

StateSpaceBlock scalar_block(double a, double b, double c, double d);

}  // namespace idob
