#include "cryptolint/automaton.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <vector>

namespace cryptolint {

namespace {

struct Nfa {
    struct State {
        std::vector<int> eps;
        std::vector<std::pair<int, int>> onLabel;  // (label index, target)
    };
    std::vector<State> states;

    int add() {
        states.emplace_back();
        return static_cast<int>(states.size()) - 1;
    }
};

struct Fragment {
    int start;
    int accept;
};

void collectLabels(const OrderPattern& p, std::set<std::string>& out) {
    if (p.kind == OrderPattern::Kind::Event) {
        out.insert(p.label);
        return;
    }
    for (const auto& c : p.children) collectLabels(c, out);
}

Fragment build(const OrderPattern& p, Nfa& nfa, const std::map<std::string, int>& labelIds) {
    using K = OrderPattern::Kind;
    switch (p.kind) {
        case K::Event: {
            int s = nfa.add();
            int t = nfa.add();
            nfa.states[s].onLabel.emplace_back(labelIds.at(p.label), t);
            return {s, t};
        }
        case K::Concat: {
            Fragment acc = build(p.children.front(), nfa, labelIds);
            for (size_t i = 1; i < p.children.size(); ++i) {
                Fragment next = build(p.children[i], nfa, labelIds);
                nfa.states[acc.accept].eps.push_back(next.start);
                acc.accept = next.accept;
            }
            return acc;
        }
        case K::Alt: {
            int s = nfa.add();
            int t = nfa.add();
            for (const auto& c : p.children) {
                Fragment f = build(c, nfa, labelIds);
                nfa.states[s].eps.push_back(f.start);
                nfa.states[f.accept].eps.push_back(t);
            }
            return {s, t};
        }
        case K::Star: {
            Fragment inner = build(p.children.front(), nfa, labelIds);
            int s = nfa.add();
            int t = nfa.add();
            nfa.states[s].eps.push_back(inner.start);
            nfa.states[s].eps.push_back(t);
            nfa.states[inner.accept].eps.push_back(inner.start);
            nfa.states[inner.accept].eps.push_back(t);
            return {s, t};
        }
        case K::Plus: {
            Fragment inner = build(p.children.front(), nfa, labelIds);
            int t = nfa.add();
            nfa.states[inner.accept].eps.push_back(inner.start);
            nfa.states[inner.accept].eps.push_back(t);
            return {inner.start, t};
        }
        case K::Opt: {
            Fragment inner = build(p.children.front(), nfa, labelIds);
            int s = nfa.add();
            int t = nfa.add();
            nfa.states[s].eps.push_back(inner.start);
            nfa.states[s].eps.push_back(t);
            nfa.states[inner.accept].eps.push_back(t);
            return {s, t};
        }
    }
    return {0, 0};
}

std::set<int> epsClosure(const Nfa& nfa, std::set<int> states) {
    std::vector<int> work(states.begin(), states.end());
    while (!work.empty()) {
        int s = work.back();
        work.pop_back();
        for (int t : nfa.states[s].eps) {
            if (states.insert(t).second) work.push_back(t);
        }
    }
    return states;
}

}  // namespace

TypestateAutomaton compileOrder(const OrderPattern& pattern) {
    std::set<std::string> labelSet;
    collectLabels(pattern, labelSet);

    TypestateAutomaton dfa;
    dfa.alphabet.assign(labelSet.begin(), labelSet.end());
    std::map<std::string, int> labelIds;
    for (size_t i = 0; i < dfa.alphabet.size(); ++i) labelIds[dfa.alphabet[i]] = static_cast<int>(i);

    Nfa nfa;
    Fragment root = build(pattern, nfa, labelIds);

    std::map<std::set<int>, int> stateIds;
    std::vector<std::set<int>> order;
    std::set<int> start = epsClosure(nfa, {root.start});
    stateIds[start] = 0;
    order.push_back(start);
    dfa.transitions.emplace_back();
    dfa.accepting.push_back(start.count(root.accept) > 0);

    for (size_t i = 0; i < order.size(); ++i) {
        // Copy: order may reallocate while we append new subset states.
        std::set<int> current = order[i];
        std::map<int, std::set<int>> moves;
        for (int s : current) {
            for (auto [label, target] : nfa.states[s].onLabel) moves[label].insert(target);
        }
        for (auto& [label, targets] : moves) {
            std::set<int> closure = epsClosure(nfa, targets);
            auto it = stateIds.find(closure);
            int id;
            if (it == stateIds.end()) {
                id = static_cast<int>(order.size());
                stateIds[closure] = id;
                order.push_back(closure);
                dfa.transitions.emplace_back();
                dfa.accepting.push_back(closure.count(root.accept) > 0);
            } else {
                id = it->second;
            }
            dfa.transitions[i][label] = id;
        }
    }

    dfa.stateCount = static_cast<int>(order.size());
    dfa.initial = 0;
    return dfa;
}

std::vector<AutomatonIssue> validateAutomaton(const TypestateAutomaton& a) {
    std::vector<AutomatonIssue> issues;
    if (a.stateCount <= 0) {
        issues.push_back({"automaton has no states"});
        return issues;
    }
    if (a.initial < 0 || a.initial >= a.stateCount) issues.push_back({"initial state out of range"});
    if (static_cast<int>(a.accepting.size()) != a.stateCount ||
        static_cast<int>(a.transitions.size()) != a.stateCount) {
        issues.push_back({"state tables inconsistent with state count"});
        return issues;
    }

    bool anyAccepting = false;
    for (bool acc : a.accepting) anyAccepting = anyAccepting || acc;
    if (!anyAccepting) issues.push_back({"automaton has no accepting state"});

    for (int s = 0; s < a.stateCount; ++s) {
        for (auto [label, target] : a.transitions[s]) {
            if (label < 0 || label >= static_cast<int>(a.alphabet.size()))
                issues.push_back({"state " + std::to_string(s) + " has a transition on an unknown label"});
            if (target < 0 || target >= a.stateCount)
                issues.push_back({"state " + std::to_string(s) + " has a transition to a missing state"});
        }
    }
    if (!issues.empty()) return issues;

    std::vector<bool> reachable(a.stateCount, false);
    std::vector<int> work{a.initial};
    reachable[a.initial] = true;
    while (!work.empty()) {
        int s = work.back();
        work.pop_back();
        for (auto [label, target] : a.transitions[s]) {
            if (!reachable[target]) {
                reachable[target] = true;
                work.push_back(target);
            }
        }
    }
    for (int s = 0; s < a.stateCount; ++s) {
        if (a.accepting[s] && !reachable[s])
            issues.push_back({"accepting state " + std::to_string(s) + " unreachable from initial state"});
    }

    // Reverse reachability from accepting states: a live automaton has no
    // state from which acceptance is impossible.
    std::vector<std::vector<int>> reverse(a.stateCount);
    for (int s = 0; s < a.stateCount; ++s)
        for (auto [label, target] : a.transitions[s]) reverse[target].push_back(s);
    std::vector<bool> live(a.stateCount, false);
    work.clear();
    for (int s = 0; s < a.stateCount; ++s) {
        if (a.accepting[s]) {
            live[s] = true;
            work.push_back(s);
        }
    }
    while (!work.empty()) {
        int s = work.back();
        work.pop_back();
        for (int p : reverse[s]) {
            if (!live[p]) {
                live[p] = true;
                work.push_back(p);
            }
        }
    }
    for (int s = 0; s < a.stateCount; ++s) {
        if (reachable[s] && !live[s])
            issues.push_back({"state " + std::to_string(s) + " cannot reach an accepting state"});
    }
    return issues;
}

}  // namespace cryptolint
