/* Compiled as C99 to keep the public header free of C++ constructs. */
#include "gpdps/gpdps.h"

int gpdps_c_header_check(void) {
  gpdps_triple t = {0.5, 0.25, 1.0};
  gpdps_schedule* s = NULL;
  gpdps_triple out;
  int ok;
  if (gpdps_schedule_fixed(t, &s) != GPDPS_OK) return 0;
  ok = gpdps_schedule_next(s, 3, &out) == GPDPS_OK && out.tau == 0.5;
  gpdps_schedule_free(s);
  return ok;
}
