#include "flowaudit/transaction.hpp"

#include "flowaudit/text.hpp"

namespace flowaudit {

std::string HttpTransaction::header(std::string_view name) const {
    std::string want = to_lower(name);
    for (const auto& [k, v] : headers)
        if (to_lower(k) == want)
            return v;
    return "";
}

std::string canonical_host(std::string_view host) {
    std::string h = to_lower(trim(host));
    while (!h.empty() && h.back() == '.')
        h.pop_back();
    // strip :port, but leave IPv6 literals alone
    auto colon = h.rfind(':');
    if (colon != std::string::npos && h.find(':') == colon)
        h.resize(colon);
    return h;
}

} // namespace flowaudit
