#include "machslab/state.hpp"

namespace machslab {

MhdState::MhdState(const GridPtr& grid) : u(grid), B(grid), p(grid), S(grid) {}

MhdState::MhdState(VecField u_, VecField B_, Field p_, Field S_, double t_)
    : u(std::move(u_)), B(std::move(B_)), p(std::move(p_)), S(std::move(S_)), t(t_) {
    require(u.dim() == p.grid().dim() && B.dim() == p.grid().dim(), "state component dimension mismatch");
}

bool MhdState::all_finite() const { return u.all_finite() && B.all_finite() && p.all_finite() && S.all_finite(); }

std::vector<const Field*> MhdState::fields() const {
    std::vector<const Field*> f;
    for (const auto& c : u.components()) f.push_back(&c);
    for (const auto& c : B.components()) f.push_back(&c);
    f.push_back(&p);
    f.push_back(&S);
    return f;
}

std::vector<Field*> MhdState::fields() {
    std::vector<Field*> f;
    for (auto& c : u.components()) f.push_back(&c);
    for (auto& c : B.components()) f.push_back(&c);
    f.push_back(&p);
    f.push_back(&S);
    return f;
}

MhdState& MhdState::axpy(double a, const MhdState& x) {
    auto dst = fields();
    auto src = x.fields();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i]->array() += a * src[i]->array();
    return *this;
}

MhdState& MhdState::scale(double a) {
    for (auto* f : fields()) *f *= a;
    return *this;
}

std::vector<Field> TimeStack::scalar_stack(int field_index) const {
    std::vector<Field> out;
    for (const auto& lv : levels) out.push_back(*lv.fields()[static_cast<std::size_t>(field_index)]);
    return out;
}

}  // namespace machslab
