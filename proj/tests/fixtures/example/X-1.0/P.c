unsigned p_hash(unsigned x) { return x * 31u + 7u; }
