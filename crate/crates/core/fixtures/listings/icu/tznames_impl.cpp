U_NAMESPACE_BEGIN

void
TimeZoneNamesImpl::loadAllDisplayNames(UErrorCode& status) {
    if (U_FAILURE(status)) return;
    TimeZoneNamesImpl *nonConstThis = const_cast<TimeZoneNamesImpl *>(this);
    nonConstThis->internalLoadAllDisplayNames(status);
}

U_NAMESPACE_END
