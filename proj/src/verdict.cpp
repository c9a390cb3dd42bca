#include "netctrb/verdict.hpp"

#include <sstream>

namespace netctrb {

std::string to_string(Status s) {
    switch (s) {
        case Status::Controllable: return "controllable";
        case Status::Uncontrollable: return "uncontrollable";
        default: return "inconclusive";
    }
}

std::string Certificate::describe() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::NotLeaderFollowerConnected:
            os << "not leader-follower connected";
            if (index > 0) os << " (order " << index << ")";
            break;
        case Kind::UnionGraphNotLeaderFollowerConnected:
            os << "union graph not leader-follower connected";
            break;
        case Kind::AgentNotControllable:
            os << "agent " << index << " not controllable";
            break;
        case Kind::Pbh:
            if (pbh) os << "left eigenvector at lambda = " << pbh->lambda << " orthogonal to B";
            break;
    }
    if (!component.empty()) {
        os << "; leaderless component {";
        for (std::size_t i = 0; i < component.size(); ++i)
            os << (i ? "," : "") << component[i];
        os << "}";
    }
    return os.str();
}

}  // namespace netctrb
