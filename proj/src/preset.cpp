#include "horocount/preset.hpp"

namespace horo {

Window Window::inflated(const Rational& margin) const {
    Window w = *this;
    w.x.lo -= margin;
    w.x.hi += margin;
    if (dim == 2) {
        w.y.lo -= margin;
        w.y.hi += margin;
    }
    return w;
}

namespace {

GroupPreset make_modular() {
    GroupPreset g{
        GroupName::Modular,
        "modular",
        1,
        1.0,
        1,
        1,
        {MoebiusMap(1, 1, 0, 1), MoebiusMap(0, -1, 1, 0)},
        Window::interval(0, 1),
        {BoundaryPoint::infinity(), 1},
        Rational(1, 16),
    };
    return g;
}

GroupPreset make_picard() {
    const Gaussian i{0, 1};
    GroupPreset g{
        GroupName::Picard,
        "picard",
        2,
        2.0,
        2,
        2,
        {MoebiusMap(1, 1, 0, 1), MoebiusMap(1, i, 0, 1), MoebiusMap(0, -1, 1, 0)},
        Window::box(0, 1, 0, 1),
        {BoundaryPoint::infinity(), 1},
        Rational(1, 8),
    };
    return g;
}

}  // namespace

const GroupPreset& preset(GroupName id) {
    static const GroupPreset modular = make_modular();
    static const GroupPreset picard = make_picard();
    return id == GroupName::Modular ? modular : picard;
}

const GroupPreset& preset(std::string_view name) {
    if (name == "modular") return preset(GroupName::Modular);
    if (name == "picard") return preset(GroupName::Picard);
    throw Error(ErrorKind::UnknownGroup, "unknown group preset '" + std::string(name) + "' (expected modular or picard)");
}

}  // namespace horo
