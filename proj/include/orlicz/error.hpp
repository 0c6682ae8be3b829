#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace orlicz {

enum class ErrorCode {
    AllInfinite,
    GridMismatch,
    EmptyEffectiveDomain,
    EmptyLevel,
    OriginNotInterior,
    OriginNotInteriorDomain,
    NonPositiveSamples,
    NonPositiveWeight,
    WeightRejected,
    TruncationUnreliable,
    QuadratureFailure,
    UnboundedSupport,
    NonCompactPerturbation,
    WulffDegenerate,
    RankDeficient,
    NotEven,
    ConditionUnverified,
    NoProgress,
    InvalidArgument,
    Parse,
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::AllInfinite: return "AllInfinite";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::EmptyEffectiveDomain: return "EmptyEffectiveDomain";
    case ErrorCode::EmptyLevel: return "EmptyLevel";
    case ErrorCode::OriginNotInterior: return "OriginNotInterior";
    case ErrorCode::OriginNotInteriorDomain: return "OriginNotInteriorDomain";
    case ErrorCode::NonPositiveSamples: return "NonPositiveSamples";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::WeightRejected: return "WeightRejected";
    case ErrorCode::TruncationUnreliable: return "TruncationUnreliable";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::UnboundedSupport: return "UnboundedSupport";
    case ErrorCode::NonCompactPerturbation: return "NonCompactPerturbation";
    case ErrorCode::WulffDegenerate: return "WulffDegenerate";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::NotEven: return "NotEven";
    case ErrorCode::ConditionUnverified: return "ConditionUnverified";
    case ErrorCode::NoProgress: return "NoProgress";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Parse: return "Parse";
    }
    return "Unknown";
}

/// Exception carrying a machine-readable code alongside the message.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline void require(bool condition, ErrorCode code, const std::string& what) {
    if (!condition) throw Error(code, what);
}

} // namespace orlicz
