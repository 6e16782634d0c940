#include "dome/conflict/grouping.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "dome/errors.hpp"
#include "dome/text_util.hpp"

namespace dome {

namespace {

std::string rule_key(int rule_id, const StoredQuadruple& q) {
    const std::string s = normalize_key(q.triple.subject);
    const std::string a = normalize_key(q.triple.action);
    const std::string o = normalize_key(q.triple.object);
    switch (rule_id) {
        case 1: return s + '\x1f' + a;
        case 2: return s + '\x1f' + a + '\x1f' + o;
        case 3: return a + '\x1f' + o;
        case 4: return s + '\x1f' + o;
        case 5: return s;
        default: throw InputError("unknown grouping rule " + std::to_string(rule_id));
    }
}

std::vector<std::string> rule_key_fields(int rule_id, const StoredQuadruple& q) {
    const std::string s = normalize_key(q.triple.subject);
    const std::string a = normalize_key(q.triple.action);
    const std::string o = normalize_key(q.triple.object);
    switch (rule_id) {
        case 1: return {s, a};
        case 2: return {s, a, o};
        case 3: return {a, o};
        case 4: return {s, o};
        case 5: return {s};
        default: throw InputError("unknown grouping rule " + std::to_string(rule_id));
    }
}

/// The rule's "must vary" check over a candidate member set.
bool differ_satisfied(int rule_id, const std::vector<const StoredQuadruple*>& members) {
    std::set<std::string> values;
    std::set<int> chapters;
    for (const StoredQuadruple* q : members) {
        chapters.insert(q->chapter);
        switch (rule_id) {
            case 1: values.insert(normalize_key(q->triple.object)); break;
            case 2: break;  // chapters carry the variation
            case 3: values.insert(normalize_key(q->triple.subject)); break;
            case 4: values.insert(normalize_key(q->triple.action)); break;
            case 5: values.insert(normalize_key(q->triple.object)); break;
            default: throw InputError("unknown grouping rule " + std::to_string(rule_id));
        }
    }
    switch (rule_id) {
        case 2: return chapters.size() >= 2;
        case 5: return chapters.size() >= 2 && values.size() >= 2;
        default: return values.size() >= 2;
    }
}

std::string escape(const std::string& s, char quote) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == quote || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

}  // namespace

std::vector<QuadrupleGroup> group_quadruples(const std::vector<StoredQuadruple>& quadruples,
                                             const GroupingOptions& options) {
    std::set<std::string> attributive;
    for (const std::string& a : options.attributive_actions) attributive.insert(normalize_key(a));

    std::set<int> available;
    for (const StoredQuadruple& q : quadruples) available.insert(q.id);

    std::vector<QuadrupleGroup> groups;

    // Most-specific rule first: rule 2's key refines rule 1's, so running
    // rule 1 first under consumption would starve rule 2 entirely.
    for (int rule_id : {2, 1, 3, 4, 5}) {
        std::map<std::string, std::vector<const StoredQuadruple*>> buckets;
        std::vector<std::string> bucket_order;  // first-seen = ascending min id
        for (const StoredQuadruple& q : quadruples) {
            if (options.consume && !available.count(q.id)) continue;
            if (rule_id == 5 && !attributive.count(normalize_key(q.triple.action))) continue;
            const std::string key = rule_key(rule_id, q);
            auto [it, fresh] = buckets.try_emplace(key);
            if (fresh) bucket_order.push_back(key);
            it->second.push_back(&q);
        }
        for (const std::string& key : bucket_order) {
            std::vector<const StoredQuadruple*>& members = buckets[key];
            if (members.size() < 2 || !differ_satisfied(rule_id, members)) continue;
            std::sort(members.begin(), members.end(),
                      [](const StoredQuadruple* a, const StoredQuadruple* b) {
                          if (a->chapter != b->chapter) return a->chapter < b->chapter;
                          return a->id < b->id;
                      });
            QuadrupleGroup group;
            group.rule_id = rule_id;
            group.key = rule_key_fields(rule_id, *members.front());
            for (const StoredQuadruple* q : members) group.member_ids.push_back(q->id);
            groups.push_back(std::move(group));
            if (options.consume)
                for (const StoredQuadruple* q : members) available.erase(q->id);
        }
    }
    return groups;
}

std::string serialize_group_members(const QuadrupleGroup& group,
                                    const std::vector<StoredQuadruple>& quadruples) {
    std::map<int, const StoredQuadruple*> by_id;
    for (const StoredQuadruple& q : quadruples) by_id[q.id] = &q;

    std::string out = "[";
    bool first = true;
    for (int id : group.member_ids) {
        auto it = by_id.find(id);
        if (it == by_id.end()) throw InputError("group member id " + std::to_string(id) +
                                                " not among the given quadruples");
        const StoredQuadruple& q = *it->second;
        if (group.rule_id == 5) {
            if (!first) out += ",";
            out += "['" + escape(q.triple.object + " " + q.triple.subject, '\'') + "'," +
                   std::to_string(q.chapter) + "]";
        } else {
            if (!first) out += ", ";
            out += "(\"" + escape(q.triple.subject, '"') + "\", \"" +
                   escape(q.triple.action, '"') + "\", \"" + escape(q.triple.object, '"') +
                   "\", " + std::to_string(q.chapter) + ")";
        }
        first = false;
    }
    out += "]";
    return out;
}

}  // namespace dome
