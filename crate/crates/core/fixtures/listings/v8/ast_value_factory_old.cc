// Old implementation
#define F(name, str)                                                    \
  {                                                                     \
    name##_string_ = AstRawString::Create(str);                         \
    HashMap::Entry* entry =                                             \
        string_table_.InsertNew(name##_string_, name##_string_->Hash()); \
    entry->value = reinterpret_cast<void*>(1);                          \
  }
AST_STRING_CONSTANTS(F)
#undef F
