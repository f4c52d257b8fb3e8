#include "chainlog/chain.hpp"

#include "chainlog/errors.hpp"

namespace chainlog {

void check_block_invariants(const Block& b) {
    if (b.gasUsed > b.gasLimit)
        throw DecodeError("block " + std::to_string(b.number) + ": gasUsed exceeds gasLimit");
    for (std::size_t i = 0; i < b.transactions.size(); ++i) {
        const auto& tx = b.transactions[i];
        if (i > 0 && tx.index <= b.transactions[i - 1].index)
            throw DecodeError("block " + std::to_string(b.number) + ": transactions out of order");
        std::uint64_t prevLog = 0;
        bool first = true;
        for (const auto& log : tx.logs) {
            if (!first && log.logIndex <= prevLog)
                throw DecodeError("transaction " + render_word32(tx.hash) + ": logs out of order");
            if (log.topics.size() > 4)
                throw DecodeError("log entry with more than 4 topics");
            prevLog = log.logIndex;
            first = false;
        }
    }
}

} // namespace chainlog
