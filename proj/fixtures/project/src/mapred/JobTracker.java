package org.apache.hadoop.mapred;

public class JobTracker {
    /**
     * Launches the newly created job.
     */
    public void startJob(String jobId) {
        LOG.info("Job created, executing " + jobId);
    }
}
