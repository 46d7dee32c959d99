#pragma once

#include "twothree/derivation.hpp"
#include "twothree/fg_module.hpp"
#include "twothree/int_matrix.hpp"
#include "twothree/integer.hpp"
#include "twothree/json_io.hpp"
#include "twothree/lattice.hpp"
#include "twothree/normal_form.hpp"
#include "twothree/oracle.hpp"
#include "twothree/prime.hpp"
#include "twothree/ses.hpp"
#include "twothree/subcat.hpp"
