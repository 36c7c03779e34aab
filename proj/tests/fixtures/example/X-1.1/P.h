#ifndef P_H
#define P_H

unsigned p_hash(unsigned x);
size_t p_table_size(const char *name, size_t hint);
void p_table_clear(void *table, size_t count);
extern int p_table_insert(void *table, const char *key, unsigned value);

#endif
