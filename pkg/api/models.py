from django.db import models

from lang.suites import TestCase, TestSuite


class Assignment(models.Model):
    """
    An introductory programming assignment: a test suite and one or more reference solutions.
    """
    slug = models.SlugField(max_length=64, unique=True)  # e.g. ipa05
    title = models.CharField(max_length=255)
    description = models.TextField(blank=True)

    def __str__(self):
        return f"{self.slug}: {self.title}"

    def test_suite(self):
        return TestSuite(tuple(TestCase(case.stdin, case.expected_stdout) for case in self.cases.all()))

    class Meta:
        db_table = 'assignment'
        ordering = ['slug']


class SuiteCase(models.Model):
    """
    One input/expected-output pair of an assignment's test suite.
    """
    assignment = models.ForeignKey(Assignment, on_delete=models.CASCADE, related_name='cases')
    position = models.IntegerField()  # Order within the suite
    stdin = models.TextField(blank=True)
    expected_stdout = models.TextField(blank=True)

    def __str__(self):
        return f"Case {self.position} of {self.assignment.slug}"

    class Meta:
        constraints = [
            models.CheckConstraint(
                check=models.Q(position__gte=0),
                name='position_gte_0',
            ),
            models.UniqueConstraint(fields=['assignment', 'position'], name='unique_case_position'),
        ]

        db_table = 'suite_case'
        ordering = ['position']


class ReferenceSolution(models.Model):
    """
    A correct program the repair engine can take as reference.
    """
    assignment = models.ForeignKey(Assignment, on_delete=models.CASCADE, related_name='references')
    label = models.CharField(max_length=64)  # e.g. v1
    source = models.TextField()

    def __str__(self):
        return f"{self.assignment.slug}/{self.label}"

    class Meta:
        constraints = [
            models.UniqueConstraint(fields=['assignment', 'label'], name='unique_reference_label'),
        ]

        db_table = 'reference_solution'
        ordering = ['label']


class Submission(models.Model):
    """
    A student program and the outcome of testing and repairing it.
    """
    PENDING = 'PENDING'
    CORRECT = 'CORRECT'  # passed the suite as submitted
    FIXED = 'FIXED'
    EXHAUSTED = 'EXHAUSTED'
    TIMEOUT = 'TIMEOUT'
    INVALID = 'INVALID'  # does not parse or resolve
    STATUS_CHOICES = [
        (PENDING, 'Pending'),
        (CORRECT, 'Correct'),
        (FIXED, 'Fixed'),
        (EXHAUSTED, 'Exhausted'),
        (TIMEOUT, 'Timeout'),
        (INVALID, 'Invalid'),
    ]

    assignment = models.ForeignKey(Assignment, on_delete=models.CASCADE, related_name='submissions')
    source = models.TextField()
    status = models.CharField(max_length=10, choices=STATUS_CHOICES, default=PENDING)
    message = models.TextField(blank=True)  # Parse error or repair summary
    tests_passed = models.IntegerField(default=0)
    tests_total = models.IntegerField(default=0)
    repaired_source = models.TextField(blank=True, null=True)
    reference = models.ForeignKey(
        ReferenceSolution, on_delete=models.SET_NULL, related_name='submissions',
        null=True, blank=True
    )
    mapping = models.JSONField(blank=True, null=True)  # buggy variable -> reference variable
    mappings_tried = models.IntegerField(default=0)
    candidates_tried = models.IntegerField(default=0)
    elapsed = models.FloatField(default=0)  # Seconds spent repairing
    created_at = models.DateTimeField(auto_now_add=True)

    def __str__(self):
        return f"Submission {self.id} for {self.assignment.slug} ({self.status})"

    class Meta:
        constraints = [
            models.CheckConstraint(
                check=models.Q(mappings_tried__gte=0),
                name='mappings_tried_gte_0',
            ),
            models.CheckConstraint(
                check=models.Q(candidates_tried__gte=0),
                name='candidates_tried_gte_0',
            ),
            models.CheckConstraint(
                check=models.Q(elapsed__gte=0),
                name='elapsed_gte_0',
            ),
        ]

        db_table = 'submission'
        ordering = ['-created_at', '-id']
