#include "dome/cli/ledger.hpp"

#include <json.hpp>

namespace dome {

CallLedger CallLedger::from_trace(const CallTrace& trace) {
    CallLedger ledger;
    for (const CallRecord& record : trace.snapshot()) {
        if (record.kind == "chat") {
            ++ledger.per_template[record.template_id];
            ++ledger.chat_calls;
        } else {
            ++ledger.embed_calls;
        }
        if (record.purpose == "kg_construction") ++ledger.kg_construction;
        ++ledger.total;
    }
    return ledger;
}

std::string CallLedger::to_json() const {
    nlohmann::json doc{{"per_template", per_template},
                       {"chat_calls", chat_calls},
                       {"embed_calls", embed_calls},
                       {"total", total},
                       {"kg_construction", kg_construction}};
    return doc.dump(2) + "\n";
}

}  // namespace dome
