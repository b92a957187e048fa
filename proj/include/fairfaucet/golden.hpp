#pragma once

#include "fairfaucet/scenario.hpp"

namespace fairfaucet {

/// Three users demanding <4, 11, 15> against 30 units, one CMF distribution.
Scenario cmf_table_scenario();

/// The same three users over five AMF epochs with scripted demands
/// <4,11,15>, <11,3,8>, <7,8,12>, <17,13,5> and an epoch capacity of 30.
Scenario amf_table_scenario();

}  // namespace fairfaucet
