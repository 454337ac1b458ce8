#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace meshat {

enum class ErrorCode {
  // course and roster
  InvalidCalendar,
  CourseExists,
  NoCourse,
  AlreadyClosed,
  CourseNotRunning,
  RosterLocked,
  InvalidRoster,
  LeaderNotMember,
  TutorIsMember,
  DuplicateTutor,
  IncompatibleRole,
  AlreadyGrouped,
  InvalidGroup,
  // lookups
  UnknownActor,
  UnknownGroup,
  UnknownTask,
  UnknownDeliverable,
  UnknownResource,
  UnknownPost,
  UnknownDiscussion,
  UnknownTag,
  UnknownParent,
  UnknownContract,
  UnknownEventSeq,
  // validation
  Forbidden,
  OutOfRange,
  AdjustmentOutOfRange,
  CycleDetected,
  InvalidTransition,
  NotSubmitted,
  AlreadySubmitted,
  AlreadyAccepted,
  AlreadyPublished,
  EmptyTags,
  DuplicateLabel,
  InvalidMerge,
  ContractLocked,
  AlreadyExists,
  InvalidAnswers,
  InvalidItem,
  // service
  StoreNotEmpty,
  InvalidConfig,
  IoFailure,
  SchemaMismatch,
  CorruptStore,
  BindFailure,
  Unauthenticated,
  BadRequest,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::optional<std::string> rule_id = {})
      : std::runtime_error(message), code_(code), rule_id_(std::move(rule_id)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::optional<std::string>& rule_id() const noexcept { return rule_id_; }

 private:
  ErrorCode code_;
  std::optional<std::string> rule_id_;
};

}  // namespace meshat
