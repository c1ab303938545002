from django.contrib import admin
from django.utils.translation import gettext_lazy as _


class TimeStampedModelAdmin(admin.ModelAdmin):
    fieldsets = (
        (_('Status'), {
            'fields': ('is_active',)
        }),
        (_('History'), {
            'fields': ('created_at', 'updated_at',)
        }),
    )
    readonly_fields = ('created_at', 'updated_at',)
    list_display = ('created_at', 'updated_at',)
    list_filter = ('created_at', 'updated_at',)
    date_hierarchy = 'created_at'
