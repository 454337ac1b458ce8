#include "meshat/error.hpp"

namespace meshat {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidCalendar: return "InvalidCalendar";
    case ErrorCode::CourseExists: return "CourseExists";
    case ErrorCode::NoCourse: return "NoCourse";
    case ErrorCode::AlreadyClosed: return "AlreadyClosed";
    case ErrorCode::CourseNotRunning: return "CourseNotRunning";
    case ErrorCode::RosterLocked: return "RosterLocked";
    case ErrorCode::InvalidRoster: return "InvalidRoster";
    case ErrorCode::LeaderNotMember: return "LeaderNotMember";
    case ErrorCode::TutorIsMember: return "TutorIsMember";
    case ErrorCode::DuplicateTutor: return "DuplicateTutor";
    case ErrorCode::IncompatibleRole: return "IncompatibleRole";
    case ErrorCode::AlreadyGrouped: return "AlreadyGrouped";
    case ErrorCode::InvalidGroup: return "InvalidGroup";
    case ErrorCode::UnknownActor: return "UnknownActor";
    case ErrorCode::UnknownGroup: return "UnknownGroup";
    case ErrorCode::UnknownTask: return "UnknownTask";
    case ErrorCode::UnknownDeliverable: return "UnknownDeliverable";
    case ErrorCode::UnknownResource: return "UnknownResource";
    case ErrorCode::UnknownPost: return "UnknownPost";
    case ErrorCode::UnknownDiscussion: return "UnknownDiscussion";
    case ErrorCode::UnknownTag: return "UnknownTag";
    case ErrorCode::UnknownParent: return "UnknownParent";
    case ErrorCode::UnknownContract: return "UnknownContract";
    case ErrorCode::UnknownEventSeq: return "UnknownEventSeq";
    case ErrorCode::Forbidden: return "Forbidden";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::AdjustmentOutOfRange: return "AdjustmentOutOfRange";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::InvalidTransition: return "InvalidTransition";
    case ErrorCode::NotSubmitted: return "NotSubmitted";
    case ErrorCode::AlreadySubmitted: return "AlreadySubmitted";
    case ErrorCode::AlreadyAccepted: return "AlreadyAccepted";
    case ErrorCode::AlreadyPublished: return "AlreadyPublished";
    case ErrorCode::EmptyTags: return "EmptyTags";
    case ErrorCode::DuplicateLabel: return "DuplicateLabel";
    case ErrorCode::InvalidMerge: return "InvalidMerge";
    case ErrorCode::ContractLocked: return "ContractLocked";
    case ErrorCode::AlreadyExists: return "AlreadyExists";
    case ErrorCode::InvalidAnswers: return "InvalidAnswers";
    case ErrorCode::InvalidItem: return "InvalidItem";
    case ErrorCode::StoreNotEmpty: return "StoreNotEmpty";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::CorruptStore: return "CorruptStore";
    case ErrorCode::BindFailure: return "BindFailure";
    case ErrorCode::Unauthenticated: return "Unauthenticated";
    case ErrorCode::BadRequest: return "BadRequest";
  }
  return "Unknown";
}

}  // namespace meshat
