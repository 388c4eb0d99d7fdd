namespace rtc {

class AtomicOps {
 public:
  template <typename T>
  static T* CompareAndSwapPtr(T* volatile* ptr, T* old_value, T* new_value)
  { return static_cast<T*>( ::InterlockedCompareExchangePointer(
          reinterpret_cast<PVOID volatile*>(ptr), old_value, new_value));
  }
};

}  // namespace rtc
