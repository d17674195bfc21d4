#include "rlf/netlist.hpp"

#include "rlf/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

namespace rlf {

namespace {

std::string canonical(const std::string& node) { return Netlist::is_ground(node) ? std::string(Netlist::ground) : node; }

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

Netlist& Netlist::add_resistor(std::string name, std::string a, std::string b, double ohms) {
    return add_element({std::move(name), Resistor{ohms}, {std::move(a), std::move(b)}});
}

Netlist& Netlist::add_inductor(std::string name, std::string a, std::string b, double henries, int winding_sign) {
    return add_element({std::move(name), Inductor{henries, winding_sign, std::nullopt}, {std::move(a), std::move(b)}});
}

Netlist& Netlist::add_capacitor(std::string name, std::string a, std::string b, double farads) {
    return add_element({std::move(name), Capacitor{farads}, {std::move(a), std::move(b)}});
}

Netlist& Netlist::add_coupling(std::string name, std::string inductor_a, std::string inductor_b, double k) {
    return add_element({std::move(name), MutualCoupling{std::move(inductor_a), std::move(inductor_b), k}, {}});
}

Netlist& Netlist::add_line(std::string name, std::string in_pos, std::string in_neg, std::string out_pos,
                           std::string out_neg, const TransmissionLine& line) {
    return add_element({std::move(name), line, {std::move(in_pos), std::move(in_neg), std::move(out_pos), std::move(out_neg)}});
}

Netlist& Netlist::add_block(std::string name, std::vector<std::string> nodes, NetworkData data) {
    return add_element({std::move(name), SParamBlock{std::move(data)}, std::move(nodes)});
}

Netlist& Netlist::add_element(Element element) {
    for (auto& n : element.nodes) {
        n = canonical(n);
    }
    elements_.push_back(std::move(element));
    return *this;
}

Netlist& Netlist::add_port(std::string node, std::string reference, double z0, std::string name) {
    if (name.empty()) {
        name = "P" + std::to_string(ports_.size() + 1);
    }
    ports_.push_back({std::move(name), canonical(node), canonical(reference), z0});
    return *this;
}

const Element* Netlist::find(std::string_view name) const {
    auto it = std::find_if(elements_.begin(), elements_.end(), [&](const Element& e) { return e.name == name; });
    return it == elements_.end() ? nullptr : &*it;
}

Element* Netlist::find(std::string_view name) {
    auto it = std::find_if(elements_.begin(), elements_.end(), [&](const Element& e) { return e.name == name; });
    return it == elements_.end() ? nullptr : &*it;
}

const Element& Netlist::at(std::string_view name) const {
    const auto* e = find(name);
    if (e == nullptr) {
        throw InvalidArgument(fmt::format("netlist has no element named '{}'", name));
    }
    return *e;
}

Element& Netlist::at(std::string_view name) {
    auto* e = find(name);
    if (e == nullptr) {
        throw InvalidArgument(fmt::format("netlist has no element named '{}'", name));
    }
    return *e;
}

std::vector<std::string> Netlist::nodes() const {
    std::vector<std::string> out;
    std::set<std::string> seen;
    auto visit = [&](const std::string& n) {
        if (!is_ground(n) && seen.insert(n).second) {
            out.push_back(n);
        }
    };
    for (const auto& p : ports_) {
        visit(p.node);
        visit(p.reference);
    }
    for (const auto& e : elements_) {
        for (const auto& n : e.nodes) {
            visit(n);
        }
    }
    return out;
}

std::vector<std::string> Netlist::inductor_names() const {
    std::vector<std::string> out;
    for (const auto& e : elements_) {
        if (e.is<Inductor>()) {
            out.push_back(e.name);
        }
    }
    return out;
}

std::size_t Netlist::count_of_resistors() const {
    return static_cast<std::size_t>(std::count_if(elements_.begin(), elements_.end(), [](const Element& e) { return e.is<Resistor>(); }));
}

std::size_t Netlist::count_of_inductors() const {
    return static_cast<std::size_t>(std::count_if(elements_.begin(), elements_.end(), [](const Element& e) { return e.is<Inductor>(); }));
}

std::size_t Netlist::count_of_capacitors() const {
    return static_cast<std::size_t>(std::count_if(elements_.begin(), elements_.end(), [](const Element& e) { return e.is<Capacitor>(); }));
}

void Netlist::clear_couplings() {
    std::erase_if(elements_, [](const Element& e) { return e.is<MutualCoupling>(); });
}

void Netlist::validate() const {
    if (ports_.empty()) {
        throw InvalidArgument("netlist has no ports");
    }

    std::set<std::string> names;
    for (const auto& e : elements_) {
        if (e.name.empty()) {
            throw InvalidArgument("netlist element with empty name");
        }
        if (!names.insert(e.name).second) {
            throw InvalidArgument(fmt::format("duplicate element name '{}'", e.name));
        }
    }

    std::set<std::pair<std::string, std::string>> coupled_pairs;
    for (const auto& e : elements_) {
        auto need_nodes = [&](std::size_t n) {
            if (e.nodes.size() != n) {
                throw InvalidArgument(fmt::format("element '{}' needs {} nodes, has {}", e.name, n, e.nodes.size()));
            }
            for (const auto& node : e.nodes) {
                if (node.empty()) {
                    throw InvalidArgument(fmt::format("element '{}' references an empty node name", e.name));
                }
            }
        };
        auto two_terminal = [&](double value, const char* what) {
            need_nodes(2);
            if (e.nodes[0] == e.nodes[1]) {
                throw InvalidArgument(fmt::format("element '{}' has both terminals on node '{}'", e.name, e.nodes[0]));
            }
            if (!positive_finite(value)) {
                throw InvalidArgument(fmt::format("{} '{}' must have a positive value, got {}", what, e.name, value));
            }
        };
        std::visit(
            [&](const auto& k) {
                using T = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<T, Resistor>) {
                    two_terminal(k.ohms, "resistor");
                } else if constexpr (std::is_same_v<T, Inductor>) {
                    two_terminal(k.henries, "inductor");
                    if (k.winding_sign != 1 && k.winding_sign != -1) {
                        throw InvalidArgument(fmt::format("inductor '{}' winding sign must be +1 or -1", e.name));
                    }
                } else if constexpr (std::is_same_v<T, Capacitor>) {
                    two_terminal(k.farads, "capacitor");
                } else if constexpr (std::is_same_v<T, MutualCoupling>) {
                    if (!e.nodes.empty()) {
                        throw InvalidArgument(fmt::format("coupling '{}' must not list nodes", e.name));
                    }
                    if (k.inductor_a == k.inductor_b) {
                        throw InvalidArgument(fmt::format("coupling '{}' references inductor '{}' twice", e.name, k.inductor_a));
                    }
                    for (const auto* ref : {&k.inductor_a, &k.inductor_b}) {
                        const auto* target = find(*ref);
                        if (target == nullptr || !target->template is<Inductor>()) {
                            throw InvalidArgument(fmt::format("coupling '{}' references '{}', which is not an inductor", e.name, *ref));
                        }
                    }
                    if (!std::isfinite(k.k) || std::abs(k.k) >= 1.0) {
                        throw InvalidArgument(fmt::format("coupling '{}' needs |k| < 1, got {}", e.name, k.k));
                    }
                    auto key = std::minmax(k.inductor_a, k.inductor_b);
                    if (!coupled_pairs.insert({key.first, key.second}).second) {
                        throw InvalidArgument(fmt::format("inductors '{}' and '{}' are coupled twice", key.first, key.second));
                    }
                } else if constexpr (std::is_same_v<T, TransmissionLine>) {
                    need_nodes(4);
                    if (!positive_finite(k.impedance) || !positive_finite(k.reference_hz) ||
                        !std::isfinite(k.electrical_length) || k.electrical_length < 0.0) {
                        throw InvalidArgument(fmt::format("line '{}' needs Z > 0, length >= 0, reference > 0", e.name));
                    }
                } else if constexpr (std::is_same_v<T, SParamBlock>) {
                    need_nodes(2 * k.data.ports());
                }
            },
            e.kind);
    }

    std::set<std::pair<std::string, std::string>> port_pairs;
    for (const auto& p : ports_) {
        if (p.node == p.reference) {
            throw InvalidArgument(fmt::format("port '{}' has identical terminals '{}'", p.name, p.node));
        }
        if (!positive_finite(p.z0)) {
            throw InvalidArgument(fmt::format("port '{}' reference impedance must be > 0", p.name));
        }
        auto key = std::minmax(p.node, p.reference);
        if (!port_pairs.insert({key.first, key.second}).second) {
            throw InvalidArgument(fmt::format("port '{}' duplicates the node pair of another port", p.name));
        }
    }

    // Connectivity to ground through elements and ports.
    const auto node_list = nodes();
    std::unordered_map<std::string, std::size_t> index;
    index.emplace(std::string(ground), 0);
    for (const auto& n : node_list) {
        index.emplace(n, index.size());
    }
    std::vector<std::size_t> parent(index.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto root = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    auto join = [&](const std::string& a, const std::string& b) { parent[root(index.at(a))] = root(index.at(b)); };
    for (const auto& p : ports_) {
        join(p.node, p.reference);
    }
    for (const auto& e : elements_) {
        for (std::size_t i = 1; i < e.nodes.size(); ++i) {
            join(e.nodes[0], e.nodes[i]);
        }
    }
    for (const auto& n : node_list) {
        if (root(index.at(n)) != root(0)) {
            throw InvalidArgument(fmt::format("node '{}' is not connected to ground", n));
        }
    }
}

}  // namespace rlf
