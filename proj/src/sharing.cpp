#include "meshat/sharing.hpp"

#include <algorithm>

#include "meshat/course.hpp"
#include "meshat/error.hpp"
#include "meshat/policy.hpp"

namespace meshat::sharing {

using policy::Action;
using policy::Resource;
using policy::ResourceClass;

namespace {

const ProjectGroup& require_group(const State& s, GroupId g) {
  const auto* group = s.group(g);
  if (!group) throw Error(ErrorCode::UnknownGroup, "unknown group " + g.str());
  return *group;
}

void require_text(const std::string& text, const char* what) {
  if (text.empty()) throw Error(ErrorCode::BadRequest, std::string(what) + " is empty");
}

}  // namespace

const BlogPost& write_student_post(Platform& p, ActorId actor, ActorId blog_owner,
                                   std::string body) {
  const State& s = p.state();
  core::require_running(s);
  policy::require(s, actor, Action::Write,
                  Resource::actor_scoped(ResourceClass::StudentBlog, blog_owner));
  require_text(body, "post body");
  const PostId id{s.next_post};
  p.append(actor, payload::BlogPost{id, BlogOwner{blog_owner}, std::move(body),
                                    PostStatus::Published});
  return *p.state().post(id);
}

const BlogPost& propose_group_post(Platform& p, ActorId member, GroupId group, std::string body) {
  const State& s = p.state();
  core::require_running(s);
  require_group(s, group);
  policy::require(s, member, Action::Write,
                  Resource::group_scoped(ResourceClass::GroupBlog, group));
  require_text(body, "post body");
  const PostId id{s.next_post};
  p.append(member, payload::BlogPost{id, BlogOwner{group}, std::move(body), PostStatus::Draft});
  return *p.state().post(id);
}

const BlogPost& confirm_group_post(Platform& p, ActorId leader, PostId post_id) {
  const State& s = p.state();
  core::require_running(s);
  const BlogPost* post = s.post(post_id);
  const auto* group = post ? std::get_if<GroupId>(&post->blog) : nullptr;
  if (!group) throw Error(ErrorCode::UnknownPost, "unknown group post " + post_id.str());
  policy::require(s, leader, Action::Write,
                  Resource::group_scoped(ResourceClass::GroupBlogDraft, *group));
  if (post->status == PostStatus::Published)
    throw Error(ErrorCode::AlreadyPublished, post_id.str() + " is already published");
  p.append(leader, payload::BlogConfirm{post_id});
  return *p.state().post(post_id);
}

std::vector<BlogPost> read_blog(const State& s, ActorId reader, const BlogOwner& owner) {
  auto blog = s.blogs.find(owner);
  if (blog == s.blogs.end())
    throw Error(ErrorCode::UnknownResource, "unknown blog " + blog_owner_str(owner));
  bool drafts = false;
  if (const auto* g = std::get_if<GroupId>(&owner)) {
    policy::require(s, reader, Action::Read, Resource::group_scoped(ResourceClass::GroupBlog, *g));
    drafts = policy::authorize(s, reader, Action::Read,
                               Resource::group_scoped(ResourceClass::GroupBlogDraft, *g))
                 .allow;
  } else {
    policy::require(s, reader, Action::Read,
                    Resource::actor_scoped(ResourceClass::StudentBlog, std::get<ActorId>(owner)));
  }
  std::vector<BlogPost> out;
  for (auto pid : blog->second.posts) {
    const BlogPost& post = s.posts.at(pid);
    if (post.status == PostStatus::Published || drafts) out.push_back(post);
  }
  return out;
}

const Discussion& create_discussion(Platform& p, ActorId tutor, std::string title,
                                    std::string body, std::set<SubjectId> tags) {
  const State& s = p.state();
  core::require_course(s);
  policy::require(s, tutor, Action::Write, Resource::course_wide(ResourceClass::ForumDiscussion));
  s.forum.check_tags(tags);
  require_text(title, "discussion title");
  require_text(body, "message body");
  const DiscussionId id = s.forum.next_discussion_id();
  p.append(tutor, payload::ForumMessage{id, true, std::move(title), std::move(tags),
                                        std::move(body)});
  return *p.state().forum.discussion(id);
}

const Discussion& reply(Platform& p, ActorId tutor, DiscussionId discussion, std::string body) {
  const State& s = p.state();
  core::require_course(s);
  policy::require(s, tutor, Action::Write, Resource::course_wide(ResourceClass::ForumDiscussion));
  if (!s.forum.discussion(discussion))
    throw Error(ErrorCode::UnknownDiscussion, "unknown discussion " + discussion.str());
  require_text(body, "message body");
  p.append(tutor, payload::ForumMessage{discussion, false, {}, {}, std::move(body)});
  return *p.state().forum.discussion(discussion);
}

const TaxonomySubject& propose_subject(Platform& p, ActorId tutor, SubjectId parent,
                                       std::string label) {
  const State& s = p.state();
  core::require_course(s);
  policy::require(s, tutor, Action::Write, Resource::course_wide(ResourceClass::Taxonomy));
  s.forum.check_propose(parent, label);
  const SubjectId id = s.forum.next_subject_id();
  p.append(tutor, payload::TaxonomyUpdate{payload::TaxonomyOp::Propose, id, parent,
                                          std::move(label), std::nullopt});
  return *p.state().forum.subject(id);
}

namespace {

void require_director(const State& s, ActorId actor) {
  policy::require(s, actor, Action::Write, Resource::course_wide(ResourceClass::Taxonomy));
  if (s.actor(actor)->role != Role::Director)
    throw Error(ErrorCode::Forbidden, "only the director curates the taxonomy",
                policy::rule_id(policy::Rule::R6));
}

}  // namespace

const TaxonomySubject& rename_subject(Platform& p, ActorId director, SubjectId subject,
                                      std::string label) {
  const State& s = p.state();
  core::require_course(s);
  require_director(s, director);
  s.forum.check_rename(subject, label);
  p.append(director, payload::TaxonomyUpdate{payload::TaxonomyOp::Rename, subject, std::nullopt,
                                             std::move(label), std::nullopt});
  return *p.state().forum.subject(subject);
}

void merge_subjects(Platform& p, ActorId director, SubjectId source, SubjectId target) {
  const State& s = p.state();
  core::require_course(s);
  require_director(s, director);
  s.forum.check_merge(source, target);
  p.append(director, payload::TaxonomyUpdate{payload::TaxonomyOp::Merge, source, std::nullopt,
                                             {}, target});
}

std::vector<DiscussionId> search_discussions(const State& s, ActorId reader,
                                             const std::set<SubjectId>& tags) {
  policy::require(s, reader, Action::Read, Resource::course_wide(ResourceClass::ForumDiscussion));
  return s.forum.search(tags);
}

namespace {

void require_answers(const ContractAnswers& answers) {
  for (const auto& a : answers)
    if (a.empty()) throw Error(ErrorCode::InvalidAnswers, "all six questions need an answer");
}

bool course_closed(const State& s) { return core::require_course(s).status == CourseStatus::Closed; }

}  // namespace

const LearningContract& init_learning_contract(Platform& p, ActorId actor, ActorId owner,
                                               ContractAnswers answers) {
  const State& s = p.state();
  const bool closed = course_closed(s);
  if (!s.actor(owner)) throw Error(ErrorCode::UnknownActor, "unknown actor " + owner.str());
  if (s.contracts.contains(owner)) {
    if (!closed)
      throw Error(ErrorCode::ContractLocked, "the contract cannot change while the course runs",
                  policy::rule_id(policy::Rule::R7));
    throw Error(ErrorCode::AlreadyExists, owner.str() + " already has a contract");
  }
  if (closed)
    throw Error(ErrorCode::ContractLocked, "contracts are written before the course closes",
                policy::rule_id(policy::Rule::R7));
  policy::require(s, actor, Action::Write,
                  Resource::actor_scoped(ResourceClass::LearningContract, owner));
  require_answers(answers);
  p.append(actor, payload::ContractUpdate{owner, false, std::move(answers), {}});
  return p.state().contracts.at(owner);
}

const LearningContract& revise_learning_contract(Platform& p, ActorId actor, ActorId owner,
                                                 ContractAnswers answers,
                                                 std::vector<Seq> linked_events) {
  const State& s = p.state();
  const bool closed = course_closed(s);
  if (!s.contracts.contains(owner))
    throw Error(ErrorCode::UnknownContract, owner.str() + " has no learning contract");
  if (!closed)
    throw Error(ErrorCode::ContractLocked, "the contract cannot change while the course runs",
                policy::rule_id(policy::Rule::R7));
  policy::require(s, actor, Action::Write,
                  Resource::actor_scoped(ResourceClass::LearningContract, owner));
  const auto& log = p.log();
  for (auto seq : linked_events) {
    if (seq == 0 || seq > log.size())
      throw Error(ErrorCode::UnknownEventSeq, "no event with seq " + std::to_string(seq));
    const auto kind = log[seq - 1].kind();
    if (kind != EventKind::BlogPost && kind != EventKind::BlogConfirm &&
        kind != EventKind::ForumMessage)
      throw Error(ErrorCode::UnknownEventSeq,
                  "event " + std::to_string(seq) + " is not a blog or forum event");
  }
  require_answers(answers);
  p.append(actor, payload::ContractUpdate{owner, true, std::move(answers),
                                          std::move(linked_events)});
  return p.state().contracts.at(owner);
}

const LearningContract* read_contract(const State& s, ActorId reader, ActorId owner) {
  policy::require(s, reader, Action::Read,
                  Resource::actor_scoped(ResourceClass::LearningContract, owner));
  auto it = s.contracts.find(owner);
  return it == s.contracts.end() ? nullptr : &it->second;
}

}  // namespace meshat::sharing
