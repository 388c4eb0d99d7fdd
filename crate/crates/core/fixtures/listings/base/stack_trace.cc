namespace base {
namespace debug {

size_t TraceStackFramePointers(const void** out_trace,
      size_t max_depth, size_t skip_initial);

StackTrace::StackTrace(size_t max_entries, size_t skip_frames) {
  void* frames[kMaxTraces];
  size_t frame_count = base::debug::TraceStackFramePointers(
      const_cast<const void**>(frames),
      max_entries, skip_frames);
  count_ = frame_count;
}

}  // namespace debug
}  // namespace base
