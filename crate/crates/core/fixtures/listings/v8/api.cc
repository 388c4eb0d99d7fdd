namespace v8 {

// The backing store deleter just deletes the indirection, which downrefs
// the shared pointer. It will get collected normally.
void BackingStoreDeleter(void* buffer, size_t length, void* info) {
	std::shared_ptr<i::BackingStore>* bs_indirection = reinterpret_cast<std::shared_ptr <i::BackingStore>*> (info);
	if (bs_indirection) {
		(*bs_indirection)->Reset();
	}
	delete bs_indirection;
}

}  // namespace v8
