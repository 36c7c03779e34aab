#include <string.h>

/* Reverse a buffer in place. */
void r_reverse(char *buf, size_t len) {
  size_t i = 0;
  size_t j = len;
  while (i + 1 < j) {
    char tmp = buf[i];
    buf[i++] = buf[--j];
    buf[j] = tmp;
  }
}
