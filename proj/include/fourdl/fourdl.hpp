// Everything at once.

#pragma once

#include "fourdl/assertions.hpp"
#include "fourdl/closure.hpp"
#include "fourdl/fourval.hpp"
#include "fourdl/generators.hpp"
#include "fourdl/model.hpp"
#include "fourdl/oracle.hpp"
#include "fourdl/parser.hpp"
#include "fourdl/printer.hpp"
#include "fourdl/relation.hpp"
#include "fourdl/semantics.hpp"
#include "fourdl/syntax.hpp"
#include "fourdl/tableau.hpp"
