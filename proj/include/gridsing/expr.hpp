#pragma once

// Small arithmetic expression language for tabulated singularity profiles:
// numbers, the variables `rho` and `n`, constants `e` and `pi`, the operators
// + - * / ^ and the functions ln, exp, sqrt.

#include <memory>
#include <string>
#include <string_view>

namespace gridsing {

class Expr {
  public:
    struct Node;

    static Expr parse(std::string_view text);

    double eval(double rho, double n) const;
    const std::string& source() const { return source_; }

  private:
    std::shared_ptr<const Node> root_;
    std::string source_;
};

}  // namespace gridsing
