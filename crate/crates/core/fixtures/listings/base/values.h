#ifndef BASE_VALUES_H_
#define BASE_VALUES_H_

namespace base {

class DictionaryValue : public Value {
 public:
  DictionaryValue();
  void SetInteger(StringPiece path, int in_value);
  void SetString(StringPiece path, StringPiece in_value);
};

}  // namespace base

#endif  // BASE_VALUES_H_
