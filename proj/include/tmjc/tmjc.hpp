#pragma once

#include "evolution.hpp"
#include "fock.hpp"
#include "oracle.hpp"
#include "quasimode.hpp"
#include "schemes.hpp"
#include "wigner.hpp"
