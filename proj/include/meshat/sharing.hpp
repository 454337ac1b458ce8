#pragma once

#include <set>
#include <string>
#include <vector>

#include "meshat/platform.hpp"
#include "meshat/types.hpp"

// Experience sharing: blogs, the tutors' tag-indexed forum and learning
// contracts.
namespace meshat::sharing {

// Blogs ----------------------------------------------------------------------

// Student posts are published immediately; only the owner writes.
const BlogPost& write_student_post(Platform& p, ActorId actor, ActorId blog_owner,
                                   std::string body);

// Group posts start as drafts and are published by the leader.
const BlogPost& propose_group_post(Platform& p, ActorId member, GroupId group, std::string body);
const BlogPost& confirm_group_post(Platform& p, ActorId leader, PostId post);

// Posts of a blog visible to `reader`, oldest first. Drafts are included only
// when the reader may read the group's draft queue.
std::vector<BlogPost> read_blog(const State& s, ActorId reader, const BlogOwner& owner);

// Forum ----------------------------------------------------------------------

const Discussion& create_discussion(Platform& p, ActorId tutor, std::string title,
                                    std::string body, std::set<SubjectId> tags);
const Discussion& reply(Platform& p, ActorId tutor, DiscussionId discussion, std::string body);

const TaxonomySubject& propose_subject(Platform& p, ActorId tutor, SubjectId parent,
                                       std::string label);
// Curation is reserved to the director.
const TaxonomySubject& rename_subject(Platform& p, ActorId director, SubjectId subject,
                                      std::string label);
void merge_subjects(Platform& p, ActorId director, SubjectId source, SubjectId target);

std::vector<DiscussionId> search_discussions(const State& s, ActorId reader,
                                             const std::set<SubjectId>& tags);

// Learning contracts ------------------------------------------------------------

const LearningContract& init_learning_contract(Platform& p, ActorId actor, ActorId owner,
                                               ContractAnswers answers);
const LearningContract& revise_learning_contract(Platform& p, ActorId actor, ActorId owner,
                                                 ContractAnswers answers,
                                                 std::vector<Seq> linked_events);
// Null when the owner has not written a contract yet.
const LearningContract* read_contract(const State& s, ActorId reader, ActorId owner);

}  // namespace meshat::sharing
