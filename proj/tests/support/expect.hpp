#pragma once

#include <gtest/gtest.h>

#include "morphkit/error.hpp"

#define EXPECT_ERROR_CODE(statement, expected)                                        \
  do {                                                                                \
    try {                                                                             \
      statement;                                                                      \
      ADD_FAILURE() << "expected " #expected " from: " #statement;                    \
    } catch (const ::morphkit::Error& e_) {                                           \
      EXPECT_EQ(::morphkit::to_string(e_.code()), ::morphkit::to_string(expected))    \
          << e_.what();                                                               \
    }                                                                                 \
  } while (0)
