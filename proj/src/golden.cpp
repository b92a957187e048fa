#include "fairfaucet/golden.hpp"

namespace fairfaucet {

Scenario cmf_table_scenario() {
    Scenario sc = Scenario::defaults(Variant::cmf, 3);
    sc.epoch_capacity = 30;
    sc.epochs = 2;
    sc.scripted_demands = std::vector<std::vector<Amount>>{{4, 11, 15}};
    return sc;
}

Scenario amf_table_scenario() {
    Scenario sc = Scenario::defaults(Variant::amf, 3);
    sc.epoch_capacity = 30;
    sc.epochs = 5;
    sc.scripted_demands = std::vector<std::vector<Amount>>{{4, 11, 15}, {11, 3, 8}, {7, 8, 12}, {17, 13, 5}};
    return sc;
}

}  // namespace fairfaucet
