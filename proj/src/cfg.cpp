#include "cryptolint/cfg.hpp"

#include <algorithm>
#include <set>

namespace cryptolint {

namespace {

// Depth-first enumeration where each CFG edge may be traversed at most once
// per path. With single-back-edge loop shapes this replays every loop body
// zero or one time; a second arrival at a loop header is forced out through
// the untaken exit edge.
struct PathWalker {
    const MethodIR& method;
    size_t budget;
    PathSet out;
    std::vector<const Statement*> trail;
    std::vector<int> visits;
    std::vector<std::vector<bool>> edgeTaken;

    PathWalker(const MethodIR& m, size_t b) : method(m), budget(b) {
        visits.assign(m.blocks.size(), 0);
        edgeTaken.reserve(m.blocks.size());
        for (const auto& block : m.blocks)
            edgeTaken.emplace_back(block.successors.size(), false);
    }

    void walk(int blockId, bool tookLoop) {
        const BasicBlock& block = method.blocks[blockId];
        ++visits[blockId];
        if (visits[blockId] > 1) tookLoop = true;
        size_t mark = trail.size();
        for (const Statement& s : block.statements) trail.push_back(&s);

        bool extended = false;
        for (size_t i = 0; i < block.successors.size(); ++i) {
            if (edgeTaken[blockId][i]) continue;
            if (out.paths.size() >= budget) {
                out.truncated = true;
                break;
            }
            extended = true;
            edgeTaken[blockId][i] = true;
            walk(block.successors[i], tookLoop);
            edgeTaken[blockId][i] = false;
        }
        if (!extended && out.paths.size() < budget) out.paths.push_back({trail, tookLoop});

        trail.resize(mark);
        --visits[blockId];
    }
};

}  // namespace

PathSet enumeratePaths(const MethodIR& method, int budget) {
    if (budget <= 0 || method.blocks.empty()) return {};
    PathWalker walker(method, static_cast<size_t>(budget));
    walker.walk(method.entry, false);
    return std::move(walker.out);
}

std::vector<std::string> validateCfg(const MethodIR& method) {
    std::vector<std::string> issues;
    auto complain = [&](const std::string& msg) { issues.push_back(method.name + ": " + msg); };

    if (method.blocks.empty()) {
        complain("no blocks");
        return issues;
    }
    int n = static_cast<int>(method.blocks.size());
    if (method.entry != 0) complain("entry is not block 0");
    for (int i = 0; i < n; ++i) {
        const BasicBlock& b = method.blocks[i];
        if (b.id != i) complain("block " + std::to_string(i) + " has id " + std::to_string(b.id));
        for (int succ : b.successors)
            if (succ < 0 || succ >= n)
                complain("block " + std::to_string(i) + " has out-of-range successor " +
                         std::to_string(succ));
        for (size_t k = 0; k < b.statements.size(); ++k) {
            if (b.statements[k].kind == Statement::Kind::Return && k + 1 != b.statements.size())
                complain("block " + std::to_string(i) + " has a return before its end");
        }
        bool sealed = !b.statements.empty() &&
                      b.statements.back().kind == Statement::Kind::Return;
        if (sealed && !b.successors.empty())
            complain("block " + std::to_string(i) + " returns but has successors");
        bool isExit = std::find(method.exits.begin(), method.exits.end(), i) != method.exits.end();
        if (b.successors.empty() && !isExit)
            complain("block " + std::to_string(i) + " has no successors but is not an exit");
        if (!b.successors.empty() && isExit)
            complain("block " + std::to_string(i) + " is an exit but has successors");
    }
    std::set<int> ids;
    for (const auto& b : method.blocks)
        for (const auto& s : b.statements)
            if (!ids.insert(s.id).second)
                complain("duplicate statement id " + std::to_string(s.id));
    return issues;
}

}  // namespace cryptolint
