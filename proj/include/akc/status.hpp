#pragma once

namespace akc {

enum class Status { Verified, Failed, Refused };

inline const char* status_name(Status s)
{
    switch (s) {
    case Status::Verified:
        return "pass";
    case Status::Failed:
        return "fail";
    default:
        return "refused";
    }
}

}  // namespace akc
