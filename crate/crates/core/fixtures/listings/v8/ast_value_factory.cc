// New Implementation
#define F(name, str)                                                    \
  {                                                                     \
    name##_string_ = AstRawString::Create(str);                         \
    string_table_.InsertNew(name##_string_, name##_string_->Hash());    \
  }
AST_STRING_CONSTANTS(F)
#undef F
