#pragma once

#include "rlf/geometry.hpp"
#include "rlf/network.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace rlf {

struct Resistor {
    double ohms;
};

/// Self inductance. `winding_sign` multiplies into every mutual coupling that
/// references this inductor, so an effective coupling is k * sign_a * sign_b.
struct Inductor {
    double henries;
    int winding_sign = +1;
    std::optional<Polyline3D> layout;
};

struct Capacitor {
    double farads;
};

struct MutualCoupling {
    std::string inductor_a;
    std::string inductor_b;
    double k;
};

/// Lossless dispersionless line. Nodes are (in+, in-, out+, out-).
struct TransmissionLine {
    double impedance;
    double electrical_length;  // radians at reference_hz
    double reference_hz;

    [[nodiscard]] double theta_at(double hz) const { return electrical_length * hz / reference_hz; }
};

/// Tabulated N-port. Nodes are (p1+, p1-, p2+, p2-, ...). The block grid must
/// contain every evaluation frequency.
struct SParamBlock {
    NetworkData data;
};

using ElementKind = std::variant<Resistor, Inductor, Capacitor, MutualCoupling, TransmissionLine, SParamBlock>;

struct Element {
    std::string name;
    ElementKind kind;
    std::vector<std::string> nodes;

    template <typename T>
    [[nodiscard]] bool is() const { return std::holds_alternative<T>(kind); }
    template <typename T>
    [[nodiscard]] const T& as() const { return std::get<T>(kind); }
    template <typename T>
    [[nodiscard]] T& as() { return std::get<T>(kind); }
};

struct Port {
    std::string name;
    std::string node;
    std::string reference;
    double z0;
};

/// Lumped-element circuit graph. Node "gnd" (alias "0") is ground.
class Netlist {
public:
    static constexpr std::string_view ground = "gnd";

    Netlist() = default;
    explicit Netlist(std::string name) : name_(std::move(name)) {}

    Netlist& add_resistor(std::string name, std::string a, std::string b, double ohms);
    Netlist& add_inductor(std::string name, std::string a, std::string b, double henries, int winding_sign = +1);
    Netlist& add_capacitor(std::string name, std::string a, std::string b, double farads);
    Netlist& add_coupling(std::string name, std::string inductor_a, std::string inductor_b, double k);
    Netlist& add_line(std::string name, std::string in_pos, std::string in_neg, std::string out_pos,
                      std::string out_neg, const TransmissionLine& line);
    Netlist& add_block(std::string name, std::vector<std::string> nodes, NetworkData data);
    Netlist& add_element(Element element);
    Netlist& add_port(std::string node, std::string reference = "gnd", double z0 = 50.0, std::string name = {});

    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    void set_name(std::string name) { name_ = std::move(name); }

    [[nodiscard]] const std::vector<Element>& elements() const noexcept { return elements_; }
    [[nodiscard]] std::vector<Element>& elements() noexcept { return elements_; }
    [[nodiscard]] const std::vector<Port>& ports() const noexcept { return ports_; }

    [[nodiscard]] const Element* find(std::string_view name) const;
    [[nodiscard]] Element* find(std::string_view name);
    [[nodiscard]] const Element& at(std::string_view name) const;
    [[nodiscard]] Element& at(std::string_view name);

    /// Non-ground node names in first-reference order.
    [[nodiscard]] std::vector<std::string> nodes() const;
    [[nodiscard]] std::vector<std::string> inductor_names() const;
    [[nodiscard]] std::size_t count_of_resistors() const;
    [[nodiscard]] std::size_t count_of_inductors() const;
    [[nodiscard]] std::size_t count_of_capacitors() const;

    /// Drops every MutualCoupling element.
    void clear_couplings();

    /// Throws InvalidArgument describing the first violated invariant.
    void validate() const;

    [[nodiscard]] static bool is_ground(std::string_view node) { return node == "gnd" || node == "0"; }

private:
    std::string name_;
    std::vector<Element> elements_;
    std::vector<Port> ports_;
};

}  // namespace rlf
