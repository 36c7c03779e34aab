#include "P.h"

static unsigned q_state;

void q_reset(void) {
  q_state = 0;
}

unsigned q_next(void) {
  q_state = p_hash(q_state + 2u);
  return q_state;
}

int q_peek(int offset) {
  return (int)(q_state >> offset);
}
