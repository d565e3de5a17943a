// Walks through the two-state example on C^3: the naive valuation cannot
// tell rho and rho_tilde apart, the thresholded one can.

#include <iostream>
#include <string>

#include "toposprob/toposprob.hpp"

using namespace toposprob;
using S = ExactScalar;

namespace {

std::string sieve_text(const PosetOrder &order, ContextMask m) {
    std::string out = "{";
    for (ContextId v : order.members(m)) {
        out += (out.size() > 1 ? ", " : "") + order.name(v);
    }
    return out + "}";
}

void print_section(const PosetOrder &order, const std::string &label, const GlobalSieveSection &s) {
    std::cout << label << "\n";
    for (ContextId v = 0; v < order.size(); ++v) {
        std::cout << "  at " << order.name(v) << ": " << sieve_text(order, s.at[v]) << "\n";
    }
}

} // namespace

int main() {
    const Materialized<S> q3(parse_instance(std::string(fixture("q3").text)));
    const auto &poset = q3.poset();
    const auto &order = poset.order();
    const auto rho = q3.state("rho");
    const auto rho_tilde = q3.state("rho_tilde");
    const auto p1 = q3.proposition("P1");

    std::cout << "contexts:";
    for (ContextId v = 0; v < order.size(); ++v) {
        std::cout << " " << order.name(v);
    }
    std::cout << "\n\n";

    print_section(order, "naive value of P1 in rho", truth_value_mixed_naive(poset, p1, rho));
    print_section(order, "naive value of P1 in rho_tilde", truth_value_mixed_naive(poset, p1, rho_tilde));

    const Rational r(3, 4);
    std::cout << "\n";
    print_section(order, "value of P1 in rho at r = 3/4", truth_value_r(poset, p1, rho, r));
    print_section(order, "value of P1 in rho_tilde at r = 3/4", truth_value_r(poset, p1, rho_tilde, r));

    const StateTable t1(poset, rho);
    const StateTable t2(poset, rho_tilde);
    const auto s = daseinise_global(p1, poset);
    std::cout << "\nmeasure of delta(P1):\n";
    for (ContextId v = 0; v < order.size(); ++v) {
        std::cout << "  " << order.name(v) << ": rho " << mu_rho(t1, s).at(v) << ", rho_tilde "
                  << mu_rho(t2, s).at(v) << "\n";
    }

    if (auto w = separate_states(poset, rho, rho_tilde)) {
        std::cout << "\nseparated by the lattice element with blocks mask " << w->proposition.bits
                  << " of " << order.name(w->proposition_context) << " at <"
                  << order.name(w->stage.context) << ", " << w->stage.r << ">: thresholds "
                  << w->first << " vs " << w->second << "\n";
    }

    const auto rep = check_appendix(poset);
    std::cout << "\nhyper-elements " << rep.hyper_elements << ", clopen subobjects "
              << rep.clopen_subobjects << ", subobjects of O " << rep.outer_subobjects
              << " (of which in the image of d: " << rep.outer_ideal << ")\n";
    return 0;
}
