#ifndef ATLAS_EXPR_HPP
#define ATLAS_EXPR_HPP

#include <map>
#include <memory>
#include <string>

namespace atlas {

// Closed-form arithmetic expressions in the variables x, y plus named
// parameters. Grammar: + - * / ^ (right-assoc), unary minus, parentheses,
// the functions sin cos tan asin acos atan exp log sqrt abs sinh cosh tanh,
// and the constant pi. Compiled once, evaluated many times.
class Expr {
  public:
    static Expr parse(const std::string& source);

    double eval(double x, double y,
                const std::map<std::string, double>& params = {}) const;

    const std::string& source() const { return source_; }

    Expr(Expr&&) noexcept;
    Expr& operator=(Expr&&) noexcept;
    ~Expr();

    struct Node;

  private:
    Expr(std::string src, std::unique_ptr<Node> root);
    std::string source_;
    std::unique_ptr<Node> root_;
};

}  // namespace atlas

#endif
