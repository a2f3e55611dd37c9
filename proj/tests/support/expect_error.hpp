#pragma once

#include <gtest/gtest.h>

#include "gutinstinct/common/error.hpp"

#define EXPECT_ERROR_CODE(statement, expected_code)                                     \
  do {                                                                                  \
    try {                                                                               \
      statement;                                                                        \
      ADD_FAILURE() << #statement " did not throw";                                     \
    } catch (const ::gutinstinct::Error& e__) {                                         \
      EXPECT_EQ(::gutinstinct::code_name(e__.code()),                                   \
                ::gutinstinct::code_name(expected_code))                                \
          << e__.what();                                                                \
    }                                                                                   \
  } while (false)
