#pragma once

#include "knapcone/errors.hpp"
#include "knapcone/exact/rational.hpp"
#include "knapcone/exact/matrix.hpp"
#include "knapcone/exact/smith.hpp"
#include "knapcone/exact/series.hpp"
#include "knapcone/lattice/lll.hpp"
#include "knapcone/lattice/multiplier.hpp"
#include "knapcone/elliott/term.hpp"
#include "knapcone/elliott/encoding.hpp"
#include "knapcone/decdenu/decdenu.hpp"
#include "knapcone/cteuclid/cteuclid.hpp"
#include "knapcone/evaluate/evaluate.hpp"
#include "knapcone/oracles/oracles.hpp"
#include "knapcone/io/suites.hpp"
#include "knapcone/io/json_io.hpp"
