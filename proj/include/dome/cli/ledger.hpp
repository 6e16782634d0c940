#pragma once

#include <map>
#include <string>

#include "dome/gateway/gateway.hpp"

namespace dome {

/// Per-template API-call accounting for one run, derived from the call trace.
/// The KG-construction subtotal counts extraction calls made while storing
/// text into the KG (purpose "kg_construction").
struct CallLedger {
    std::map<std::string, int> per_template;
    int chat_calls = 0;
    int embed_calls = 0;
    int total = 0;  // chat + embed = trace length
    int kg_construction = 0;

    static CallLedger from_trace(const CallTrace& trace);
    std::string to_json() const;
};

}  // namespace dome
